#pragma once

#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qgc/control_operator.hpp"

namespace qgc {

// Piecewise-constant control: values[n] holds u on [nΔt, (n+1)Δt), Δt = T/n.
struct ControlSignal {
  double T = 1.0;
  std::vector<double> values;

  static ControlSignal zero(double T, int n_steps);

  std::size_t size() const { return values.size(); }
  double dt() const { return T / static_cast<double>(values.size()); }
  ControlSignal reversed() const;
  void validate() const;
};

// u on [0, a.T) followed by v on [a.T, a.T + b.T); step widths must agree.
ControlSignal concatenate(const ControlSignal& a, const ControlSignal& b);

using GalerkinState = Eigen::VectorXcd;

GalerkinState basis_state(int K, int k);  // e_k, 1-based

// Exact step unitaries exp(-iΔt(diag μ + uB)) for a fixed generator pair.
// Each distinct (u, Δt) is decomposed once.
class Propagator {
 public:
  Propagator(std::span<const double> mus, const Eigen::MatrixXd& B);

  int K() const { return static_cast<int>(mus_.size()); }
  const Eigen::MatrixXcd& step(double u, double dt);
  std::size_t cache_size() const { return cache_.size(); }

 private:
  Eigen::VectorXd mus_;
  Eigen::MatrixXd B_;
  std::map<std::pair<double, double>, Eigen::MatrixXcd> cache_;
};

// States at t = 0, Δt, ..., T (n + 1 entries).
std::vector<GalerkinState> evolve(std::span<const double> mus, const Eigen::MatrixXd& B, const ControlSignal& u,
                                  const GalerkinState& c0);

GalerkinState evolve_final(std::span<const double> mus, const Eigen::MatrixXd& B, const ControlSignal& u,
                           const GalerkinState& c0);
GalerkinState evolve_final(Propagator& prop, const ControlSignal& u, const GalerkinState& c0);

// Undoes evolve_final: applies the adjoint step unitaries in reverse order.
GalerkinState evolve_inverse(std::span<const double> mus, const Eigen::MatrixXd& B, const ControlSignal& u,
                             const GalerkinState& cT);

// Σ_{k>K1} |c_k(T)|² for c0 supported on the first K1 modes, simulated at
// the dimension of B (K2). c0 may be given at length K1 or K2.
double truncation_probe(std::span<const double> mus, const Eigen::MatrixXd& B_K2, const ControlSignal& u,
                        const GalerkinState& c0, int K1);

}  // namespace qgc
