#include "qgc/galerkin.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "qgc/error.hpp"

namespace qgc {

ControlSignal ControlSignal::zero(double T, int n_steps) {
  if (n_steps < 1) throw Error(ErrorCode::InvalidArgument, "control needs at least one step");
  ControlSignal u{T, std::vector<double>(static_cast<std::size_t>(n_steps), 0.0)};
  u.validate();
  return u;
}

ControlSignal ControlSignal::reversed() const {
  return ControlSignal{T, std::vector<double>(values.rbegin(), values.rend())};
}

void ControlSignal::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorCode::InvalidArgument, "control horizon must be positive");
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "control needs at least one step");
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "control values must be finite");
}

ControlSignal concatenate(const ControlSignal& a, const ControlSignal& b) {
  a.validate();
  b.validate();
  if (std::abs(a.dt() - b.dt()) > 1e-14 * a.dt())
    throw Error(ErrorCode::DimensionMismatch, "concatenated controls need equal step widths");
  ControlSignal out{a.T + b.T, a.values};
  out.values.insert(out.values.end(), b.values.begin(), b.values.end());
  return out;
}

GalerkinState basis_state(int K, int k) {
  if (k < 1 || k > K) throw Error(ErrorCode::DimensionMismatch, "basis index out of range");
  GalerkinState e = GalerkinState::Zero(K);
  e(k - 1) = 1.0;
  return e;
}

Propagator::Propagator(std::span<const double> mus, const Eigen::MatrixXd& B)
    : mus_(Eigen::Map<const Eigen::VectorXd>(mus.data(), static_cast<Eigen::Index>(mus.size()))), B_(B) {
  if (B_.rows() != B_.cols() || B_.rows() != mus_.size())
    throw Error(ErrorCode::DimensionMismatch, "B must be K x K with K = number of eigenvalues");
}

const Eigen::MatrixXcd& Propagator::step(double u, double dt) {
  const auto key = std::make_pair(u, dt);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  Eigen::MatrixXd H = u * B_;
  H.diagonal() += mus_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
  const Eigen::MatrixXd& Q = eig.eigenvectors();
  Eigen::VectorXcd phases(Q.cols());
  for (Eigen::Index i = 0; i < Q.cols(); ++i)
    phases(i) = std::polar(1.0, -dt * eig.eigenvalues()(i));
  Eigen::MatrixXcd U = Q.cast<std::complex<double>>() * phases.asDiagonal() * Q.transpose();
  return cache_.emplace(key, std::move(U)).first->second;
}

namespace {

void check_state(const Propagator& p, const GalerkinState& c) {
  if (c.size() != p.K()) throw Error(ErrorCode::DimensionMismatch, "state length differs from K");
  if (!c.allFinite()) throw Error(ErrorCode::InvalidArgument, "state has non-finite entries");
}

}  // namespace

std::vector<GalerkinState> evolve(std::span<const double> mus, const Eigen::MatrixXd& B, const ControlSignal& u,
                                  const GalerkinState& c0) {
  Propagator prop(mus, B);
  check_state(prop, c0);
  u.validate();
  std::vector<GalerkinState> traj;
  traj.reserve(u.size() + 1);
  traj.push_back(c0);
  const double dt = u.dt();
  for (double v : u.values) traj.push_back(prop.step(v, dt) * traj.back());
  return traj;
}

GalerkinState evolve_final(Propagator& prop, const ControlSignal& u, const GalerkinState& c0) {
  check_state(prop, c0);
  u.validate();
  GalerkinState c = c0;
  GalerkinState tmp(c.size());
  const double dt = u.dt();
  for (double v : u.values) {
    tmp.noalias() = prop.step(v, dt) * c;
    c.swap(tmp);
  }
  return c;
}

GalerkinState evolve_final(std::span<const double> mus, const Eigen::MatrixXd& B, const ControlSignal& u,
                           const GalerkinState& c0) {
  Propagator prop(mus, B);
  return evolve_final(prop, u, c0);
}

GalerkinState evolve_inverse(std::span<const double> mus, const Eigen::MatrixXd& B, const ControlSignal& u,
                             const GalerkinState& cT) {
  Propagator prop(mus, B);
  check_state(prop, cT);
  u.validate();
  GalerkinState c = cT;
  GalerkinState tmp(c.size());
  const double dt = u.dt();
  for (auto it = u.values.rbegin(); it != u.values.rend(); ++it) {
    tmp.noalias() = prop.step(*it, dt).adjoint() * c;
    c.swap(tmp);
  }
  return c;
}

double truncation_probe(std::span<const double> mus, const Eigen::MatrixXd& B_K2, const ControlSignal& u,
                        const GalerkinState& c0, int K1) {
  const auto K2 = B_K2.rows();
  if (K1 < 1 || K1 >= K2) throw Error(ErrorCode::DimensionMismatch, "truncation probe needs K1 < K2");
  GalerkinState start = GalerkinState::Zero(K2);
  if (c0.size() == K1) {
    start.head(K1) = c0;
  } else if (c0.size() == K2) {
    if (c0.tail(K2 - K1).squaredNorm() != 0.0)
      throw Error(ErrorCode::InvalidArgument, "initial state must be supported on the first K1 modes");
    start = c0;
  } else {
    throw Error(ErrorCode::DimensionMismatch, "initial state must have length K1 or K2");
  }
  const GalerkinState cT = evolve_final(mus, B_K2, u, start);
  return cT.tail(K2 - K1).squaredNorm();
}

}  // namespace qgc
