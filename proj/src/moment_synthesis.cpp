#include "qgc/moment_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "qgc/error.hpp"
#include "qgc/random.hpp"

namespace qgc {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// ∫_a^{a+h} e^{iωτ} dτ
cd step_moment(double omega, double a, double h) {
  return h * std::polar(1.0, omega * (a + 0.5 * h)) * sinc(0.5 * omega * h);
}

double hs(const GalerkinState& c, double s) { return hs_norm(c, s); }

}  // namespace

void MomentProblem::validate() const {
  if (omega.empty() || omega.size() != m.size())
    throw Error(ErrorCode::DimensionMismatch, "moment problem needs one target per frequency");
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  if (omega[0] != 0.0) throw Error(ErrorCode::InvalidArgument, "first frequency must be 0");
  for (std::size_t k = 1; k < omega.size(); ++k)
    if (!(omega[k] > omega[k - 1])) throw Error(ErrorCode::NotSorted, "frequencies must be strictly increasing");
  if (std::abs(m[0].imag()) > kRealityTolerance)
    throw Error(ErrorCode::TangentViolation, "first moment must be real");
}

MomentProblem target_moments(std::span<const cd> x, std::span<const double> b_column, std::span<const double> mus,
                             double T) {
  const std::size_t K = x.size();
  if (K == 0 || b_column.size() < K || mus.size() < K)
    throw Error(ErrorCode::DimensionMismatch, "need B_{k,1} and mu_k for every target entry");
  if (std::abs(x[0].real()) > kRealityTolerance)
    throw Error(ErrorCode::TangentViolation, "i*x_1 must be real, got Re x_1 = " + std::to_string(x[0].real()));

  double bmax = 0.0;
  for (std::size_t k = 0; k < K; ++k) bmax = std::max(bmax, std::abs(b_column[k]));
  MomentProblem p;
  p.T = T;
  for (std::size_t k = 0; k < K; ++k) {
    if (std::abs(b_column[k]) <= 1e-14 * bmax || b_column[k] == 0.0)
      throw Error(ErrorCode::ZeroMatrixElement, "B_{" + std::to_string(k + 1) + ",1} vanishes");
    p.omega.push_back(mus[k] - mus[0]);
    p.m.push_back(I * x[k] / b_column[k]);
  }
  p.m[0] = p.m[0].real();
  p.validate();
  return p;
}

ControlSolution solve_control(const MomentProblem& p, int n_steps, double ridge) {
  p.validate();
  const int K = p.K();
  const int rows = 2 * K - 1;
  if (n_steps < rows)
    throw Error(ErrorCode::InvalidArgument, "n_steps must be at least 2K-1 = " + std::to_string(rows));
  if (!(ridge >= 0.0)) throw Error(ErrorCode::InvalidArgument, "ridge must be nonnegative");

  const double h = p.T / n_steps;
  Eigen::MatrixXd A(rows, n_steps);
  Eigen::VectorXd b(rows);
  // row 0: Re of the ω = 0 moment; then Re/Im pairs
  for (int n = 0; n < n_steps; ++n) {
    const double a = n * h;
    A(0, n) = h;
    for (int k = 1; k < K; ++k) {
      const cd z = step_moment(p.omega[k], a, h);
      A(2 * k - 1, n) = z.real();
      A(2 * k, n) = z.imag();
    }
  }
  b(0) = p.m[0].real();
  for (int k = 1; k < K; ++k) {
    b(2 * k - 1) = p.m[k].real();
    b(2 * k) = p.m[k].imag();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  ControlSolution out;
  out.gram_condition = smin > 0.0 ? (smax / smin) * (smax / smin) : std::numeric_limits<double>::infinity();
  if (!(out.gram_condition <= kMaxGramCondition))
    throw Error(ErrorCode::IllPosed, "Gram condition " + std::to_string(out.gram_condition) +
                                         " exceeds 1e14; try a longer horizon or more steps");

  Eigen::VectorXd proj = svd.matrixU().transpose() * b;
  for (Eigen::Index i = 0; i < sv.size(); ++i) proj(i) *= sv(i) / (sv(i) * sv(i) + ridge);
  const Eigen::VectorXd u = svd.matrixV() * proj;
  out.residual = (A * u - b).norm();
  out.u.T = p.T;
  out.u.values.assign(u.data(), u.data() + u.size());
  return out;
}

std::vector<cd> control_moments(const ControlSignal& u, std::span<const double> omega) {
  u.validate();
  const double h = u.dt();
  std::vector<cd> out;
  out.reserve(omega.size());
  for (double w : omega) {
    cd acc = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) acc += u.values[n] * step_moment(w, n * h, h);
    out.push_back(acc);
  }
  return out;
}

GalerkinState make_local_target(int K, double eps, double s, std::uint64_t seed) {
  if (K < 2) throw Error(ErrorCode::InvalidArgument, "local target needs K >= 2");
  if (!(eps > 0.0) || eps >= 1.0) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 1)");
  Rng rng(seed);
  GalerkinState d = GalerkinState::Zero(K);
  d(0) = I * rng.normal();
  for (int k = 2; k <= K; ++k) d(k - 1) = rng.complex_normal() * std::pow(static_cast<double>(k), -(s + 1.0));

  const GalerkinState e1 = basis_state(K, 1);
  const auto at = [&](double t) {
    GalerkinState v = e1 + t * d;
    return GalerkinState(v / v.norm());
  };
  const auto dist = [&](double t) { return hs(at(t) - e1, s); };

  // distance grows monotonically in t near 0; bracket then bisect
  double lo = 0.0, hi = eps / hs(d, s);
  while (dist(hi) < eps) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-17 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (dist(mid) < eps ? lo : hi) = mid;
  }
  return at(0.5 * (lo + hi));
}

GalerkinState reference_state(std::span<const double> mus, int K, double T) {
  if (K < 1 || static_cast<int>(mus.size()) < K) throw Error(ErrorCode::DimensionMismatch, "K exceeds mus");
  GalerkinState r = GalerkinState::Zero(K);
  r(0) = std::polar(1.0, -mus[0] * T);
  return r;
}

SteeringReport steer_attempt(const GalerkinState& target_in, std::span<const double> mus, const Eigen::MatrixXd& B,
                             int K_ctrl, const SteeringOptions& opt) {
  const int K_sim = static_cast<int>(B.rows());
  if (static_cast<int>(mus.size()) != K_sim || B.cols() != K_sim)
    throw Error(ErrorCode::DimensionMismatch, "mus and B disagree on K_sim");
  if (K_ctrl < 1 || K_ctrl > K_sim) throw Error(ErrorCode::DimensionMismatch, "K_ctrl must lie in [1, K_sim]");
  if (target_in.size() != K_ctrl && target_in.size() != K_sim)
    throw Error(ErrorCode::DimensionMismatch, "target must have length K_ctrl or K_sim");
  if (!(opt.tol > 0.0) || !(opt.eps_nbhd > 0.0) || opt.max_iter < 0)
    throw Error(ErrorCode::InvalidArgument, "steering tolerances must be positive");
  if (std::abs(target_in.norm() - 1.0) > 1e-10)
    throw Error(ErrorCode::NormMismatch, "target must have unit norm");

  GalerkinState target = GalerkinState::Zero(K_sim);
  target.head(target_in.size()) = target_in;
  if (target_in.size() == K_sim && target.tail(K_sim - K_ctrl).squaredNorm() != 0.0)
    throw Error(ErrorCode::InvalidArgument, "target must be supported on the controlled modes");

  SteeringReport rep;
  rep.K_ctrl = K_ctrl;
  rep.K_sim = K_sim;
  if (opt.gauge == Gauge::AlignMode1) {
    const cd rot1 = std::polar(1.0, mus[0] * opt.T) * target(0);
    if (std::abs(rot1) > 0.0) {
      rep.gauge_phase = -std::arg(rot1);
      target *= std::polar(1.0, rep.gauge_phase);
    }
  }

  rep.control = ControlSignal::zero(opt.T, opt.n_steps);
  const auto head = [&](const GalerkinState& v) { return GalerkinState(v.head(K_ctrl)); };
  const GalerkinState ref = reference_state(mus, K_sim, opt.T);
  const double start = hs(head(target - ref), opt.s);
  if (start >= opt.eps_nbhd) {
    rep.trace.push_back(start);
    rep.error_hs = start;
    rep.error_l2 = (target - ref).norm();
    return rep;
  }

  Eigen::VectorXd bcol = B.col(0).head(K_ctrl);
  Propagator prop(mus, B);
  const GalerkinState e1 = basis_state(K_sim, 1);
  const double limit = std::max(1.0, 1e3 * start);
  for (int it = 0;; ++it) {
    const GalerkinState cT = evolve_final(prop, rep.control, e1);
    const GalerkinState defect = head(target - cT);
    const double err = hs(defect, opt.s);
    rep.trace.push_back(err);
    if (err <= opt.tol) {
      rep.converged = true;
      break;
    }
    if (it == opt.max_iter || !std::isfinite(err) || err > limit) break;

    std::vector<cd> x(K_ctrl);
    for (int k = 0; k < K_ctrl; ++k) x[k] = std::polar(1.0, mus[k] * opt.T) * defect(k);
    x[0] = I * x[0].imag();  // project onto the tangent space at mode 1
    const MomentProblem mp = target_moments(x, std::span<const double>(bcol.data(), K_ctrl), mus, opt.T);
    const ControlSolution sol = solve_control(mp, opt.n_steps, opt.ridge);
    for (int n = 0; n < opt.n_steps; ++n) rep.control.values[n] += sol.u.values[n];
    rep.moment_residual = sol.residual;
    rep.gram_condition = sol.gram_condition;
    rep.iterations = it + 1;
  }

  // independent re-simulation for the reported figures
  const GalerkinState final_state = evolve_final(mus, B, rep.control, e1);
  const GalerkinState fh = head(final_state);
  const GalerkinState th = head(target);
  rep.final_norm = final_state.norm();
  rep.error_l2 = (th - fh).norm();
  rep.error_hs = hs(th - fh, opt.s);
  const cd overlap = fh.dot(th);  // Σ conj(f) t
  rep.optimal_phase = std::abs(overlap) > 0.0 ? std::arg(overlap) : 0.0;
  const GalerkinState aligned = std::polar(1.0, rep.optimal_phase) * fh;
  rep.error_l2_phase_opt = (th - aligned).norm();
  rep.error_hs_phase_opt = hs(th - aligned, opt.s);
  rep.leakage = K_ctrl < K_sim ? final_state.tail(K_sim - K_ctrl).squaredNorm() : 0.0;
  return rep;
}

SteeringReport steer_local(const GalerkinState& target, std::span<const double> mus, const Eigen::MatrixXd& B,
                           int K_ctrl, const SteeringOptions& opt) {
  SteeringReport rep = steer_attempt(target, mus, B, K_ctrl, opt);
  if (!rep.converged)
    throw Error(ErrorCode::NoConvergence, "after " + std::to_string(rep.iterations) +
                                              " iterations, last error " + std::to_string(rep.trace.back()));
  return rep;
}

GlobalReport global_plan(const GalerkinState& psi1, const GalerkinState& psi2, std::span<const double> mus,
                         const Eigen::MatrixXd& B, int K_ctrl, const SteeringOptions& opt) {
  if (psi1.size() != psi2.size()) throw Error(ErrorCode::DimensionMismatch, "states differ in length");
  const double p = psi1.norm();
  if (std::abs(p - psi2.norm()) > 1e-12) throw Error(ErrorCode::NormMismatch, "states must have equal norms");
  if (!(p > 0.0)) throw Error(ErrorCode::NormMismatch, "states must be nonzero");

  const GalerkinState a = (psi1 / p).conjugate();
  const GalerkinState b = psi2 / p;
  const GalerkinState ref = reference_state(mus, static_cast<int>(psi1.size()), opt.T);
  for (const GalerkinState* v : {&a, &b}) {
    const double d = hs(GalerkinState((*v - ref).head(std::min<Eigen::Index>(K_ctrl, v->size()))), opt.s);
    if (d >= opt.eps_nbhd)
      throw Error(ErrorCode::NotReachable, "state lies outside the local neighbourhood (distance " +
                                               std::to_string(d) + ")");
  }

  SteeringOptions leg = opt;
  leg.gauge = Gauge::AsGiven;
  GlobalReport rep;
  rep.scale = p;
  rep.leg_a = steer_local(a, mus, B, K_ctrl, leg);
  rep.leg_b = steer_local(b, mus, B, K_ctrl, leg);
  // Each step unitary has a real symmetric generator, so conj(U) = U⁻¹ and
  // Γ^w e_1 = y implies Γ^{rev w} conj(y) = e_1: reversed leg a maps psi1/p to e_1.
  rep.control = concatenate(rep.leg_a.control.reversed(), rep.leg_b.control);

  const int K_sim = static_cast<int>(B.rows());
  GalerkinState start = GalerkinState::Zero(K_sim);
  start.head(psi1.size()) = psi1;
  const GalerkinState end = evolve_final(mus, B, rep.control, start);
  GalerkinState goal = GalerkinState::Zero(K_sim);
  goal.head(psi2.size()) = psi2;
  rep.error_l2 = (end - goal).norm();
  rep.error_hs = hs(GalerkinState((end - goal).head(K_ctrl)), opt.s);
  return rep;
}

}  // namespace qgc
