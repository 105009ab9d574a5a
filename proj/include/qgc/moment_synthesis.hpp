#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qgc/galerkin.hpp"

namespace qgc {

// Find u with ∫_0^T u(τ) e^{iω_kτ} dτ = m_k, k = 1..K.
struct MomentProblem {
  std::vector<double> omega;  // μ_k − μ_1, omega[0] = 0
  std::vector<std::complex<double>> m;
  double T = 1.0;

  int K() const { return static_cast<int>(omega.size()); }
  void validate() const;
};

inline constexpr double kRealityTolerance = 1e-12;
inline constexpr double kMaxGramCondition = 1e14;

// m_k = i x_k / B_{k,1}. Requires Re x_1 = 0, the tangent condition at mode 1.
MomentProblem target_moments(std::span<const std::complex<double>> x, std::span<const double> b_column,
                             std::span<const double> mus, double T);

struct ControlSolution {
  ControlSignal u;
  double residual = 0.0;         // of the unregularized system
  double gram_condition = 0.0;   // cond(A Aᵀ)
};

// Minimal-norm least squares over n_steps piecewise-constant values, with
// Tikhonov weight `ridge` on the singular values.
ControlSolution solve_control(const MomentProblem& p, int n_steps, double ridge);

// ∫_0^T u e^{iω_kτ} dτ, exact for piecewise-constant u.
std::vector<std::complex<double>> control_moments(const ControlSignal& u, std::span<const double> omega);

// Unit-norm state at ‖target − e_1‖_(s) = eps, first K entries; random
// direction with components decaying like k^{-(s+1)}.
GalerkinState make_local_target(int K, double eps, double s, std::uint64_t seed);

enum class Gauge { AsGiven, AlignMode1 };

struct SteeringOptions {
  double T = 1.0;
  int n_steps = 2048;
  double ridge = 0.0;
  double tol = 1e-6;
  int max_iter = 20;
  double eps_nbhd = 1e-2;
  double s = 4.0;
  Gauge gauge = Gauge::AsGiven;
};

struct SteeringReport {
  ControlSignal control;
  int K_ctrl = 0;
  int K_sim = 0;
  double moment_residual = 0.0;  // last correction's solver residual
  double gram_condition = 0.0;
  int iterations = 0;
  std::vector<double> trace;     // ‖defect‖_(s) before each correction, then final
  bool converged = false;
  double gauge_phase = 0.0;      // target was multiplied by e^{i·gauge_phase}
  // recomputed from a fresh evolve on the controlled modes
  double error_l2 = 0.0;
  double error_hs = 0.0;
  double optimal_phase = 0.0;
  double error_l2_phase_opt = 0.0;
  double error_hs_phase_opt = 0.0;
  double leakage = 0.0;          // mass beyond K_ctrl at T
  double final_norm = 0.0;
};

// Chord iteration: each correction solves the linearized moment problem at
// u = 0 for the current rotating-frame defect on the first K_ctrl modes.
// mus and B are at the simulation dimension K_sim ≥ K_ctrl; target has
// length K_ctrl or K_sim. Returns unconverged reports instead of throwing.
SteeringReport steer_attempt(const GalerkinState& target, std::span<const double> mus, const Eigen::MatrixXd& B,
                             int K_ctrl, const SteeringOptions& opt);

// As steer_attempt, but NoConvergence when the tolerance is not met.
SteeringReport steer_local(const GalerkinState& target, std::span<const double> mus, const Eigen::MatrixXd& B,
                           int K_ctrl, const SteeringOptions& opt);

// Free evolution of mode 1 over [0, T], the centre of the local neighbourhood.
GalerkinState reference_state(std::span<const double> mus, int K, double T);

struct GlobalReport {
  ControlSignal control;  // horizon 2T
  double scale = 1.0;     // common norm p of psi1, psi2
  SteeringReport leg_a;   // e_1 → conj(psi1 / p), run reversed
  SteeringReport leg_b;   // e_1 → psi2 / p
  double error_l2 = 0.0;
  double error_hs = 0.0;
};

// psi1 → psi2 through p·e_1 in time 2T. Both legs must start inside the
// local neighbourhood; anything farther is NotReachable.
GlobalReport global_plan(const GalerkinState& psi1, const GalerkinState& psi2, std::span<const double> mus,
                         const Eigen::MatrixXd& B, int K_ctrl, const SteeringOptions& opt);

}  // namespace qgc
