#include "qgc/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qgc/error.hpp"

namespace qgc {

namespace {

using nlohmann::json;

// 1-based line of the first occurrence of "key" in the source, 0 if absent
int line_of(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

class Reader {
 public:
  Reader(const json& j, std::string path, const std::string& text) : j_(j), path_(std::move(path)), text_(text) {
    if (!j_.is_object()) fail(ErrorCode::TypeMismatch, path_.empty() ? "document" : path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    if (!has(key)) fail(ErrorCode::MissingRequired, name(key), "required key is missing");
    return j_.at(key);
  }

  double real(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) fail(ErrorCode::TypeMismatch, name(key), "expected a number");
    return v.get<double>();
  }
  double real(const std::string& key, double dflt) { return has(key) ? real(key) : dflt; }

  long long integer(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_integer()) fail(ErrorCode::TypeMismatch, name(key), "expected an integer");
    return v.get<long long>();
  }
  long long integer(const std::string& key, long long dflt) { return has(key) ? integer(key) : dflt; }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) fail(ErrorCode::TypeMismatch, name(key), "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& dflt) { return has(key) ? string(key) : dflt; }

  std::vector<double> reals(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array()) fail(ErrorCode::TypeMismatch, name(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail(ErrorCode::TypeMismatch, name(key), "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  const json& array(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array()) fail(ErrorCode::TypeMismatch, name(key), "expected an array");
    return v;
  }

  Reader object(const std::string& key) { return Reader(at(key), name(key), text_); }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string& path() const { return path_; }
  const std::string& text() const { return text_; }

  // every key present must have been looked at
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(ErrorCode::UnknownKey, name(it.key()), "unknown key", it.key());
  }

  [[noreturn]] void fail(ErrorCode code, const std::string& key, const std::string& msg,
                         const std::string& locate = "") const {
    const std::string leaf = locate.empty() ? key.substr(key.find_last_of('.') + 1) : locate;
    const int line = line_of(text_, leaf);
    throw Error(code, "'" + key + "' " + msg + (line > 0 ? " (line " + std::to_string(line) + ")" : ""));
  }

 private:
  const json& j_;
  std::string path_;
  const std::string& text_;
  std::set<std::string> seen_;
};

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto byte = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BoundaryCondition bc_from_string(Reader& r, const std::string& key) {
  const std::string s = r.string(key);
  if (s == "D") return BoundaryCondition::Dirichlet;
  if (s == "N") return BoundaryCondition::Neumann;
  if (s == "NK") return BoundaryCondition::NeumannKirchhoff;
  r.fail(ErrorCode::TypeMismatch, r.name(key), "must be one of D, N, NK");
}

int as_int(Reader& r, const std::string& key) {
  const long long v = r.integer(key);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    r.fail(ErrorCode::OutOfRange, r.name(key), "does not fit in an int");
  return static_cast<int>(v);
}

void check_graph(const MetricGraph& g) {
  const ValidationReport rep = validate(g);
  if (rep.ok()) return;
  std::string msg;
  for (const auto& v : rep.violations) {
    if (!msg.empty()) msg += "; ";
    if (v.vertex) msg += "vertex " + std::to_string(*v.vertex) + ": ";
    if (v.edge) msg += "edge " + std::to_string(*v.edge) + ": ";
    msg += v.message;
  }
  throw Error(ErrorCode::InvalidGraph, msg);
}

struct PotentialSpec {
  PotentialKind kind;
  std::vector<std::vector<double>> coeffs;
};

PotentialSpec read_potential(Reader& parent, const std::string& key) {
  const json& v = parent.at(key);
  if (v.is_string()) {
    try {
      return {potential_kind_from_string(v.get<std::string>()), {}};
    } catch (const Error&) {
      parent.fail(ErrorCode::TypeMismatch, parent.name(key), "names no known potential");
    }
  }
  Reader r = parent.object(key);
  PotentialSpec spec{PotentialKind::Zero, {}};
  try {
    spec.kind = potential_kind_from_string(r.string("kind"));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidArgument) throw;
    r.fail(ErrorCode::TypeMismatch, r.name("kind"), "names no known potential");
  }
  if (r.has("custom_coeffs")) {
    for (const auto& row : r.array("custom_coeffs")) {
      if (!row.is_array()) r.fail(ErrorCode::TypeMismatch, r.name("custom_coeffs"), "expected arrays of numbers");
      std::vector<double> c;
      for (const auto& x : row) {
        if (!x.is_number()) r.fail(ErrorCode::TypeMismatch, r.name("custom_coeffs"), "expected arrays of numbers");
        c.push_back(x.get<double>());
      }
      spec.coeffs.push_back(std::move(c));
    }
  }
  if (spec.kind == PotentialKind::Custom && spec.coeffs.empty())
    r.fail(ErrorCode::MissingRequired, r.name("custom_coeffs"), "is required for a custom potential");
  r.finish();
  return spec;
}

MetricGraph read_explicit_graph(Reader& r) {
  std::vector<EdgeSpec> edges;
  const auto& fin = r.array("finite_edges");
  for (std::size_t i = 0; i < fin.size(); ++i) {
    Reader e(fin[i], r.name("finite_edges") + "[" + std::to_string(i) + "]", r.text());
    EdgeSpec s;
    s.kind = EdgeKind::Finite;
    s.id = as_int(e, "id");
    s.length = e.real("length");
    s.from = as_int(e, "from");
    s.to = as_int(e, "to");
    e.finish();
    edges.push_back(s);
  }
  if (r.has("infinite_edges")) {
    const auto& inf = r.array("infinite_edges");
    for (std::size_t i = 0; i < inf.size(); ++i) {
      Reader e(inf[i], r.name("infinite_edges") + "[" + std::to_string(i) + "]", r.text());
      EdgeSpec s;
      s.kind = EdgeKind::InfinitePeriodic;
      s.id = as_int(e, "id");
      s.length = e.real("period");
      s.from = as_int(e, "root");
      e.finish();
      edges.push_back(s);
    }
  }
  std::vector<std::pair<int, BoundaryCondition>> vertices;
  const auto& vs = r.array("vertices");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    Reader v(vs[i], r.name("vertices") + "[" + std::to_string(i) + "]", r.text());
    const int id = as_int(v, "id");
    vertices.emplace_back(id, bc_from_string(v, "bc"));
    v.finish();
  }
  return MetricGraph::from_edges(std::move(edges), std::move(vertices));
}

MetricGraph read_preset_graph(Reader& r) {
  const std::string preset = r.string("preset");
  if (preset == "tadpole") return build_tadpole(r.real("head_length", 1.0), r.real("tail_period", 1.0));
  if (preset == "star") return build_star(r.reals("finite_lengths"), r.has("infinite_periods") ? r.reals("infinite_periods") : std::vector<double>{});
  r.fail(ErrorCode::TypeMismatch, r.name("preset"), "must be tadpole or star");
}

// Graph object, optionally carrying an embedded potential.
MetricGraph read_graph(Reader& r, std::optional<PotentialSpec>* potential) {
  MetricGraph g;
  if (r.has("preset")) {
    g = read_preset_graph(r);
  } else {
    g = read_explicit_graph(r);
  }
  if (potential && r.has("potential")) *potential = read_potential(r, "potential");
  r.finish();
  check_graph(g);
  return g;
}

BasisFamily family_from_string(Reader& r, const std::string& key) {
  const std::string s = r.string(key);
  if (s == "tadpole_cos") return BasisFamily::TadpoleCos;
  if (s == "tadpole_sin") return BasisFamily::TadpoleSin;
  if (s == "star") return BasisFamily::StarAssumptionsA;
  r.fail(ErrorCode::TypeMismatch, r.name(key), "must be tadpole_cos, tadpole_sin or star");
}

void positive(Reader& r, const std::string& key, double v) {
  if (!(v > 0.0)) r.fail(ErrorCode::OutOfRange, r.name(key), "must be positive");
}

}  // namespace

MetricGraph parse_graph(const std::string& text) {
  const json j = parse_json(text);
  Reader r(j, "", text);
  return read_graph(r, nullptr);
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  const json j = parse_json(text);
  Reader r(j, "", text);
  RunConfig cfg;
  // a misspelt top-level key would otherwise surface as a missing one
  static const std::set<std::string> known{"graph", "potential", "basis", "offsets", "K", "K_sim", "M",
                                           "decay_p", "control", "target", "drive", "norms", "out", "seed"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) r.fail(ErrorCode::UnknownKey, it.key(), "unknown key");

  std::optional<PotentialSpec> potential;
  const json& gj = r.at("graph");
  if (gj.is_string()) {
    const std::filesystem::path p = std::filesystem::path(base_dir) / gj.get<std::string>();
    const std::string gtext = read_file(p.string());
    const json gdoc = parse_json(gtext);
    Reader gr(gdoc, "", gtext);
    cfg.graph = read_graph(gr, &potential);
  } else {
    Reader gr = r.object("graph");
    cfg.graph = read_graph(gr, &potential);
  }

  if (r.has("potential")) potential = read_potential(r, "potential");
  if (!potential) r.fail(ErrorCode::MissingRequired, "potential", "required key is missing");
  cfg.potential = potential->kind;
  cfg.custom_coeffs = potential->coeffs;

  if (r.has("basis")) {
    cfg.basis = family_from_string(r, "basis");
  } else {
    cfg.basis = is_tadpole(cfg.graph) ? BasisFamily::TadpoleCos : BasisFamily::StarAssumptionsA;
  }
  if (r.has("offsets")) {
    cfg.offsets = r.reals("offsets");
  } else {
    cfg.offsets.assign(static_cast<std::size_t>(cfg.graph.infinite_count()), 0.0);
  }

  cfg.K = static_cast<int>(r.integer("K", cfg.K));
  cfg.K_sim = static_cast<int>(r.integer("K_sim", std::max<long long>(cfg.K_sim, cfg.K)));
  if (cfg.K < 2) r.fail(ErrorCode::OutOfRange, "K", "must be at least 2");
  if (cfg.K_sim < cfg.K) r.fail(ErrorCode::OutOfRange, "K_sim", "must be at least K = " + std::to_string(cfg.K));
  cfg.M = static_cast<int>(r.integer("M", cfg.M));
  if (cfg.M < 1) r.fail(ErrorCode::OutOfRange, "M", "must be at least 1");
  cfg.decay_p = r.real("decay_p", cfg.decay_p);

  if (r.has("control")) {
    Reader c = r.object("control");
    auto& o = cfg.control;
    o.T = c.real("T", o.T);
    o.n_steps = static_cast<int>(c.integer("n_steps", o.n_steps));
    o.ridge = c.real("ridge", o.ridge);
    o.tol = c.real("tol", o.tol);
    o.max_iter = static_cast<int>(c.integer("max_iter", o.max_iter));
    o.eps_nbhd = c.real("eps_nbhd", o.eps_nbhd);
    o.s = c.real("s", o.s);
    const std::string gauge = c.string("gauge", "as_given");
    if (gauge == "as_given") {
      o.gauge = Gauge::AsGiven;
    } else if (gauge == "align_mode1") {
      o.gauge = Gauge::AlignMode1;
    } else {
      c.fail(ErrorCode::TypeMismatch, c.name("gauge"), "must be as_given or align_mode1");
    }
    positive(c, "T", o.T);
    positive(c, "tol", o.tol);
    positive(c, "eps_nbhd", o.eps_nbhd);
    if (o.n_steps < 1) c.fail(ErrorCode::OutOfRange, c.name("n_steps"), "must be positive");
    if (o.ridge < 0.0) c.fail(ErrorCode::OutOfRange, c.name("ridge"), "must be nonnegative");
    if (o.max_iter < 0) c.fail(ErrorCode::OutOfRange, c.name("max_iter"), "must be nonnegative");
    c.finish();
  }
  if (r.has("target")) {
    Reader t = r.object("target");
    cfg.target_eps = t.real("eps", cfg.target_eps);
    if (!(cfg.target_eps > 0.0 && cfg.target_eps < 1.0)) t.fail(ErrorCode::OutOfRange, t.name("eps"), "must lie in (0, 1)");
    t.finish();
  }
  if (r.has("drive")) {
    Reader d = r.object("drive");
    const std::string kind = d.string("kind", "random");
    if (kind == "zero") {
      cfg.drive.kind = DriveKind::Zero;
    } else if (kind == "constant") {
      cfg.drive.kind = DriveKind::Constant;
    } else if (kind == "random") {
      cfg.drive.kind = DriveKind::Random;
    } else {
      d.fail(ErrorCode::TypeMismatch, d.name("kind"), "must be zero, constant or random");
    }
    cfg.drive.amplitude = d.real("amplitude", cfg.drive.amplitude);
    cfg.drive.initial_mode = static_cast<int>(d.integer("initial_mode", cfg.drive.initial_mode));
    if (cfg.drive.initial_mode < 1 || cfg.drive.initial_mode > cfg.K_sim)
      d.fail(ErrorCode::OutOfRange, d.name("initial_mode"), "must lie in [1, K_sim]");
    d.finish();
  }
  if (r.has("norms")) cfg.norms = r.reals("norms");
  cfg.out = r.string("out", cfg.out);
  if (r.has("seed")) {
    const long long s = r.integer("seed");
    if (s < 0) r.fail(ErrorCode::OutOfRange, "seed", "must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  r.finish();
  return cfg;
}

Potential build_potential(const RunConfig& cfg) {
  if (cfg.potential == PotentialKind::Custom) return make_custom_potential(cfg.graph, cfg.custom_coeffs);
  return make_potential(cfg.potential, cfg.graph);
}

}  // namespace qgc
