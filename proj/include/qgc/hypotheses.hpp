#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qgc/control_operator.hpp"
#include "qgc/spectral.hpp"

namespace qgc {

// (j, k), (l, m) with j < k, l < m, (j, k) < (l, m) lexicographically and
// μ_j − μ_k ≈ μ_l − μ_m. Indices are 1-based.
struct ResonantQuadruple {
  int j = 0, k = 0, l = 0, m = 0;
  double defect = 0.0;
  double combination = 0.0;  // filled by nonresonance_margin / check_hypotheses

  friend bool operator==(const ResonantQuadruple& a, const ResonantQuadruple& b) {
    return a.j == b.j && a.k == b.k && a.l == b.l && a.m == b.m;
  }
};

struct GapResult {
  double value = 0.0;
  int witness = 0;  // k attaining min μ_{k+M} − μ_k
};

struct DecayFit {
  double p = 0.0;
  double C_est = 0.0;
  int witness = 0;
  bool pass = false;
};

struct MarginResult {
  double min_abs = 0.0;
  std::optional<ResonantQuadruple> witness;
  bool vacuous = false;  // no resonant quadruples: condition holds trivially
  bool pass = false;
};

inline constexpr double kMarginThreshold = 1e-12;
inline constexpr double kRelativeResonanceTolerance = 1e-9;

GapResult spectral_gap(std::span<const double> mus, int M);

DecayFit decay_fit(std::span<const double> column, double p);

// Gap values are binned at `tol` resolution, so only neighbouring bins are
// compared; output is sorted lexicographically by (j, k, l, m).
std::vector<ResonantQuadruple> find_resonances(std::span<const double> mus, int K, double tol);

// Exact variant for spectra that are integer multiples of a common unit.
std::vector<ResonantQuadruple> find_resonances_exact(std::span<const long long> levels, int K);

// μ_k / (4π²) as integers when every ratio rounds within 1e-9 relative.
std::optional<std::vector<long long>> integer_levels(std::span<const double> mus);

// combination ⟨φ_j,Bφ_j⟩ − ⟨φ_k,Bφ_k⟩ − ⟨φ_l,Bφ_l⟩ + ⟨φ_m,Bφ_m⟩
double diagonal_combination(std::span<const double> b_diag, const ResonantQuadruple& q);

MarginResult nonresonance_margin(std::span<const double> b_diag, std::vector<ResonantQuadruple>& quads,
                                 double threshold = kMarginThreshold);

struct HypothesisOptions {
  int M = 2;
  double decay_p = 4.0;
};

struct HypothesisReport {
  int K = 0;
  GapResult gap_1;
  int M = 1;
  GapResult gap_M;
  DecayFit decay;
  double resonance_tolerance = 0.0;
  std::vector<ResonantQuadruple> resonances;
  MarginResult margin;
  std::optional<bool> exact_resonances_agree;
  bool gap_pass = false;
  bool gap_M_pass = false;
  bool pass = false;
};

HypothesisReport check_hypotheses(std::span<const double> mus, const BMatrix& B, const HypothesisOptions& opt);

}  // namespace qgc
