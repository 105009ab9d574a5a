#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>

#include "qgc/cli.hpp"
#include "qgc/hypotheses.hpp"
#include "qgc/random.hpp"

namespace qgc {

namespace {

struct Model {
  ModeBasis basis;
  std::vector<double> mus;
  BMatrix B;
};

ModeBasis make_basis(const RunConfig& cfg, int K) {
  switch (cfg.basis) {
    case BasisFamily::TadpoleCos: return tadpole_cos_basis(cfg.graph, K);
    case BasisFamily::TadpoleSin: return tadpole_sin_basis(cfg.graph, K);
    case BasisFamily::StarAssumptionsA: return star_basis(cfg.graph, K, cfg.offsets);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown basis family");
}

Model make_model(const RunConfig& cfg, int K) {
  Model m;
  m.basis = make_basis(cfg, K);
  m.mus = m.basis.eigenvalues();
  m.B = assemble_b(m.basis, build_potential(cfg), K);
  return m;
}

class Writer {
 public:
  Writer(const RunConfig& cfg, Format f, RunResult& res) : dir_(cfg.out), format_(f), res_(res) {}

  void table(const std::string& stem, const Table& t) { put(stem, emit(t, format_)); }
  void report(const std::string& stem, const Node& n) { put(stem, emit(n, format_)); }

 private:
  void put(const std::string& stem, const std::string& bytes) {
    const std::string path =
        (std::filesystem::path(dir_) / (stem + (format_ == Format::Csv ? ".csv" : ".json"))).string();
    write_atomic(path, bytes);
    log_line(2, "wrote " + path);
    res_.artifacts.push_back(path);
  }

  std::string dir_;
  Format format_;
  RunResult& res_;
};

Node gap_node(const GapResult& g, bool pass) {
  Node n = Node::object();
  n.set("value", g.value);
  n.set("witness", g.witness);
  n.set("pass", pass);
  return n;
}

Node quad_node(const ResonantQuadruple& q) {
  Node n = Node::object();
  n.set("j", q.j);
  n.set("k", q.k);
  n.set("l", q.l);
  n.set("m", q.m);
  n.set("defect", q.defect);
  n.set("combination", q.combination);
  return n;
}

Node hypothesis_node(const HypothesisReport& h) {
  Node n = Node::object();
  n.set("K", h.K);
  n.set("gap_1", gap_node(h.gap_1, h.gap_pass));
  Node gm = gap_node(h.gap_M, h.gap_M_pass);
  gm.set("M", h.M);
  n.set("gap_M", std::move(gm));
  Node d = Node::object();
  d.set("p", h.decay.p);
  d.set("C_est", h.decay.C_est);
  d.set("witness", h.decay.witness);
  d.set("pass", h.decay.pass);
  n.set("decay", std::move(d));
  n.set("resonance_tolerance", h.resonance_tolerance);
  Node rs = Node::array();
  for (const auto& q : h.resonances) rs.push(quad_node(q));
  n.set("resonances", std::move(rs));
  Node mg = Node::object();
  mg.set("min_abs", h.margin.witness ? Node(h.margin.min_abs) : Node());
  mg.set("witness", h.margin.witness ? quad_node(*h.margin.witness) : Node());
  mg.set("vacuous", h.margin.vacuous);
  mg.set("pass", h.margin.pass);
  n.set("margin", std::move(mg));
  n.set("exact_resonances_agree", h.exact_resonances_agree ? Node(*h.exact_resonances_agree) : Node());
  n.set("pass", h.pass);
  return n;
}

Table resonance_table(const HypothesisReport& h) {
  Table t{{"j", "k", "l", "m", "defect", "combination"}, {}};
  for (const auto& q : h.resonances)
    t.add({static_cast<long long>(q.j), static_cast<long long>(q.k), static_cast<long long>(q.l),
           static_cast<long long>(q.m), q.defect, q.combination});
  return t;
}

Table control_table(const ControlSignal& u) {
  Table t{{"step", "time", "value"}, {}};
  for (std::size_t n = 0; n < u.size(); ++n)
    t.add({static_cast<long long>(n + 1), static_cast<double>(n) * u.dt(), u.values[n]});
  return t;
}

Table state_table(const GalerkinState& c) {
  Table t{{"k", "re", "im"}, {}};
  for (Eigen::Index k = 0; k < c.size(); ++k) t.add({static_cast<long long>(k + 1), c(k).real(), c(k).imag()});
  return t;
}

Node options_node(const RunConfig& cfg) {
  const auto& o = cfg.control;
  Node n = Node::object();
  n.set("T", o.T);
  n.set("n_steps", o.n_steps);
  n.set("ridge", o.ridge);
  n.set("tol", o.tol);
  n.set("max_iter", o.max_iter);
  n.set("eps_nbhd", o.eps_nbhd);
  n.set("s", o.s);
  return n;
}

Node steering_node(const SteeringReport& r, const RunConfig& cfg) {
  Node n = Node::object();
  n.set("K_ctrl", r.K_ctrl);
  n.set("K_sim", r.K_sim);
  n.set("converged", r.converged);
  n.set("iterations", r.iterations);
  Node tr = Node::array();
  for (double e : r.trace) tr.push(e);
  n.set("trace", std::move(tr));
  n.set("moment_residual", r.moment_residual);
  n.set("gram_condition", r.gram_condition);
  Node err = Node::object();
  err.set("l2", r.error_l2);
  err.set("hs", r.error_hs);
  err.set("l2_phase_opt", r.error_l2_phase_opt);
  err.set("hs_phase_opt", r.error_hs_phase_opt);
  n.set("errors", std::move(err));
  Node g = Node::object();
  g.set("mode", cfg.control.gauge == Gauge::AsGiven ? "as_given" : "align_mode1");
  g.set("phase", r.gauge_phase);
  g.set("optimal_phase", r.optimal_phase);
  n.set("gauge", std::move(g));
  n.set("leakage", r.leakage);
  n.set("final_norm", r.final_norm);
  return n;
}

HypothesisReport run_check(const Model& m, const RunConfig& cfg) {
  HypothesisOptions opt;
  opt.M = cfg.M;
  opt.decay_p = cfg.decay_p;
  return check_hypotheses(m.mus, m.B, opt);
}

BMatrix leading(const BMatrix& B, int K) {
  BMatrix out = B;
  out.entries = B.entries.topLeftCorner(K, K);
  return out;
}

int cmd_spectrum(const RunConfig& cfg, Writer& w) {
  const ModeBasis b = make_basis(cfg, cfg.K);
  const auto& edges = b.graph.edges();
  Table t{{"k", "eigenvalue", "frequency"}, {}};
  for (const auto& e : edges) {
    const std::string p = "e" + std::to_string(e.id) + "_";
    t.header.insert(t.header.end(), {p + "amplitude", p + "shift", p + "flavor"});
  }
  for (const auto& mode : b.modes) {
    std::vector<Cell> row{static_cast<long long>(mode.index), mode.eigenvalue, mode.frequency};
    for (const auto& f : mode.edges) {
      row.emplace_back(f.amplitude);
      row.emplace_back(f.shift);
      row.emplace_back(std::string(to_string(f.flavor)));
    }
    t.add(std::move(row));
  }
  w.table("spectrum", t);

  const auto mus = b.eigenvalues();
  const SpectralReport v = verify_modes(b, 1e-10);
  Node n = Node::object();
  n.set("basis", to_string(b.family));
  n.set("K", cfg.K);
  n.set("gap_1", gap_node(spectral_gap(mus, 1), true));
  Node vr = Node::object();
  vr.set("gram_deviation", v.gram_deviation);
  vr.set("eigenvalues_sorted", v.eigenvalues_sorted);
  vr.set("max_residual", v.max_residual);
  vr.set("pass", v.pass);
  n.set("verification", std::move(vr));
  if (b.resonance) {
    Node rn = Node::object();
    rn.set("infinite_product", b.resonance->infinite_product);
    rn.set("full_product", b.resonance->full_product ? Node(*b.resonance->full_product) : Node());
    rn.set("reference_period", b.resonance->reference_period);
    n.set("generators", std::move(rn));
  }
  w.report("spectrum_report", n);
  return v.pass ? kExitOk : kExitCheckFailed;
}

int cmd_bmatrix(const RunConfig& cfg, Writer& w) {
  const Model m = make_model(cfg, cfg.K);
  Table t{{"j", "k", "value"}, {}};
  for (int j = 1; j <= cfg.K; ++j)
    for (int k = 1; k <= cfg.K; ++k)
      t.add({static_cast<long long>(j), static_cast<long long>(k), m.B.entries(j - 1, k - 1)});
  w.table("bmatrix", t);
  return kExitOk;
}

int cmd_check(const RunConfig& cfg, Writer& w) {
  const Model m = make_model(cfg, cfg.K);
  const HypothesisReport h = run_check(m, cfg);
  w.report("check", hypothesis_node(h));
  w.table("resonances", resonance_table(h));
  log_line(1, std::string("hypotheses ") + (h.pass ? "pass" : "FAIL"));
  return h.pass ? kExitOk : kExitCheckFailed;
}

ControlSignal make_drive(const RunConfig& cfg) {
  ControlSignal u = ControlSignal::zero(cfg.control.T, cfg.control.n_steps);
  if (cfg.drive.kind == DriveKind::Constant) {
    for (double& v : u.values) v = cfg.drive.amplitude;
  } else if (cfg.drive.kind == DriveKind::Random) {
    Rng rng(cfg.seed);
    for (double& v : u.values) v = cfg.drive.amplitude * rng.normal();
  }
  return u;
}

int cmd_evolve(const RunConfig& cfg, Writer& w) {
  const Model m = make_model(cfg, cfg.K_sim);
  const ControlSignal u = make_drive(cfg);
  const GalerkinState c0 = basis_state(cfg.K_sim, cfg.drive.initial_mode);
  const auto traj = evolve(m.mus, m.B.entries, u, c0);

  Table t{{"step", "time"}, {}};
  for (int k = 1; k <= cfg.K_sim; ++k) t.header.push_back("p" + std::to_string(k));
  t.header.push_back("norm");
  for (double s : cfg.norms) t.header.push_back("hs_" + format_real(s));
  for (std::size_t n = 0; n < traj.size(); ++n) {
    std::vector<Cell> row{static_cast<long long>(n), static_cast<double>(n) * u.dt()};
    for (int k = 0; k < cfg.K_sim; ++k) row.emplace_back(std::norm(traj[n](k)));
    row.emplace_back(traj[n].norm());
    for (double s : cfg.norms) row.emplace_back(hs_norm(traj[n], s));
    t.add(std::move(row));
  }
  w.table("evolve", t);
  w.table("control", control_table(u));

  double drift = 0.0;
  for (const auto& c : traj) drift = std::max(drift, std::abs(c.norm() - c0.norm()));
  Node n = Node::object();
  n.set("K_sim", cfg.K_sim);
  n.set("n_steps", static_cast<long long>(u.size()));
  n.set("T", u.T);
  n.set("max_norm_drift", drift);
  w.report("evolve_report", n);
  return kExitOk;
}

// Target of the local leg, on the controlled modes.
GalerkinState local_target(const RunConfig& cfg, std::uint64_t seed) {
  return make_local_target(cfg.K, cfg.target_eps, cfg.control.s, seed);
}

int cmd_steer(const RunConfig& cfg, Writer& w) {
  const Model m = make_model(cfg, cfg.K_sim);
  const HypothesisReport h = run_check(Model{m.basis, {m.mus.begin(), m.mus.begin() + cfg.K}, leading(m.B, cfg.K)}, cfg);
  if (!h.pass) {
    w.report("check", hypothesis_node(h));
    log_line(1, "hypotheses fail; not steering");
    return kExitCheckFailed;
  }
  const GalerkinState target = local_target(cfg, cfg.seed);
  const SteeringReport r = steer_attempt(target, m.mus, m.B.entries, cfg.K, cfg.control);
  w.table("target", state_table(target));
  w.table("control", control_table(r.control));
  Node n = Node::object();
  n.set("seed", static_cast<long long>(cfg.seed));
  n.set("target_eps", cfg.target_eps);
  n.set("options", options_node(cfg));
  n.set("steering", steering_node(r, cfg));
  w.report("steer", n);
  log_line(1, "steer: " + std::string(r.converged ? "converged" : "did not converge") + " after " +
                  std::to_string(r.iterations) + " iterations, error " + format_real(r.error_hs));
  return r.converged ? kExitOk : kExitCheckFailed;
}

int cmd_roundtrip(const RunConfig& cfg, Writer& w) {
  const Model m = make_model(cfg, cfg.K_sim);
  const HypothesisReport h = run_check(Model{m.basis, {m.mus.begin(), m.mus.begin() + cfg.K}, leading(m.B, cfg.K)}, cfg);
  Node n = Node::object();
  n.set("seed", static_cast<long long>(cfg.seed));
  n.set("target_eps", cfg.target_eps);
  n.set("options", options_node(cfg));
  n.set("hypotheses_pass", h.pass);
  if (!h.pass) {
    n.set("pass", false);
    w.report("roundtrip", n);
    w.report("check", hypothesis_node(h));
    return kExitCheckFailed;
  }

  const double tol = cfg.control.tol;
  const GalerkinState target = local_target(cfg, cfg.seed);
  const SteeringReport r = steer_attempt(target, m.mus, m.B.entries, cfg.K, cfg.control);
  n.set("local", steering_node(r, cfg));

  // fresh simulation of the returned control, independent of the iteration
  const GalerkinState e1 = basis_state(cfg.K_sim, 1);
  const GalerkinState cT = evolve_final(m.mus, m.B.entries, r.control, e1);
  const GalerkinState diff = GalerkinState(cT.head(cfg.K)) - target;
  const double resim_hs = hs_norm(diff, cfg.control.s);
  const double leakage = cfg.K < cfg.K_sim ? truncation_probe(m.mus, m.B.entries, r.control, basis_state(cfg.K, 1), cfg.K) : 0.0;
  Node rs = Node::object();
  rs.set("error_l2", diff.norm());
  rs.set("error_hs", resim_hs);
  rs.set("leakage", leakage);
  rs.set("pass", r.converged && resim_hs <= tol);
  n.set("resimulation", std::move(rs));
  w.table("control", control_table(r.control));

  // global leg between two local targets
  bool global_pass = false;
  Node gn = Node::object();
  try {
    const GalerkinState psi2 = local_target(cfg, cfg.seed + 1);
    const GlobalReport g = global_plan(target, psi2, m.mus, m.B.entries, cfg.K, cfg.control);
    global_pass = g.error_hs <= 10.0 * tol;
    gn.set("horizon", g.control.T);
    gn.set("leg_a_iterations", g.leg_a.iterations);
    gn.set("leg_b_iterations", g.leg_b.iterations);
    gn.set("error_l2", g.error_l2);
    gn.set("error_hs", g.error_hs);
    w.table("global_control", control_table(g.control));
  } catch (const Error& e) {
    if (exit_code_for(e.code()) != kExitCheckFailed) throw;
    gn.set("failure", e.what());
  }
  gn.set("pass", global_pass);
  n.set("global", std::move(gn));

  const bool pass = r.converged && resim_hs <= tol && global_pass;
  n.set("pass", pass);
  w.report("roundtrip", n);
  log_line(1, std::string("roundtrip ") + (pass ? "pass" : "FAIL") + ", local error " + format_real(resim_hs));
  return pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoConvergence:
    case ErrorCode::IllPosed:
    case ErrorCode::NotReachable:
    case ErrorCode::ZeroMatrixElement:
      return kExitCheckFailed;
    default:
      return kExitInputError;
  }
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"spectrum", "bmatrix", "check", "evolve", "steer", "roundtrip"};
  return names;
}

RunResult run(const std::string& subcommand, const RunConfig& cfg, Format format) {
  RunResult res;
  Writer w(cfg, format, res);
  if (subcommand == "spectrum") {
    res.exit_code = cmd_spectrum(cfg, w);
  } else if (subcommand == "bmatrix") {
    res.exit_code = cmd_bmatrix(cfg, w);
  } else if (subcommand == "check") {
    res.exit_code = cmd_check(cfg, w);
  } else if (subcommand == "evolve") {
    res.exit_code = cmd_evolve(cfg, w);
  } else if (subcommand == "steer") {
    res.exit_code = cmd_steer(cfg, w);
  } else if (subcommand == "roundtrip") {
    res.exit_code = cmd_roundtrip(cfg, w);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown subcommand '" + subcommand + "'");
  }
  return res;
}

int log_level() {
  const char* v = std::getenv("QGC_LOG");
  if (!v) return 1;
  const std::string s(v);
  if (s == "0" || s == "quiet") return 0;
  if (s == "2" || s == "debug") return 2;
  return 1;
}

void log_line(int level, const std::string& msg) {
  if (level <= log_level()) std::cerr << "qgc: " << msg << "\n";
}

}  // namespace qgc
