#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgc/graph.hpp"

namespace qgc {

enum class Flavor { Cos, Sin, Const };
const char* to_string(Flavor f);

// Component of a mode on one edge: amplitude * cos(freq * (x + shift)),
// amplitude * sin(freq * (x + shift)), or the constant `amplitude`.
struct EdgeForm {
  double amplitude = 0.0;
  double shift = 0.0;
  Flavor flavor = Flavor::Const;
};

struct EigenMode {
  int index = 1;            // 1-based
  double eigenvalue = 0.0;  // μ_k
  double frequency = 0.0;   // √μ_k, kept separately so 2nπ stays exact
  std::vector<EdgeForm> edges;

  double value(std::size_t edge_pos, double x) const;
  double derivative(std::size_t edge_pos, double x) const;
};

enum class BasisFamily { TadpoleCos, TadpoleSin, StarAssumptionsA };
const char* to_string(BasisFamily f);

struct ResonanceData {
  std::vector<long long> l;            // l_j, one per edge (finite then infinite)
  std::vector<long long> numerators;   // l_j * L_{N+1} / L_j
  long long infinite_product = 1;      // ∏_{j>N} l_j L_{N+1}/L_j
  std::optional<long long> full_product;  // ∏ over all edges; empty if a finite ratio is irrational
  double reference_period = 1.0;       // L_{N+1}
  std::vector<double> offsets;         // c_j used by the basis (empty from resonant_integers)
  std::vector<int> admissible;         // indices k at which the tangent identity was verified

  long long n(int k) const { return static_cast<long long>(k - 1) * infinite_product; }
  std::optional<long long> n_tilde(int k) const {
    if (!full_product) return std::nullopt;
    return static_cast<long long>(k - 1) * *full_product;
  }
};

struct ModeBasis {
  MetricGraph graph;
  BasisFamily family = BasisFamily::TadpoleCos;
  std::vector<EigenMode> modes;
  std::optional<ResonanceData> resonance;

  std::size_t size() const { return modes.size(); }
  std::vector<double> eigenvalues() const;
};

inline constexpr double kPoleDistance = 1e-6;
inline constexpr double kCosineFloor = 1e-8;
inline constexpr double kTangentTolerance = 1e-9;
inline constexpr long long kMaxDenominator = 10000;

ModeBasis tadpole_cos_basis(const MetricGraph& g, int K);
ModeBasis tadpole_sin_basis(const MetricGraph& g, int K);

// Smallest l_j with l_j L_{N+1}/L_j integral, for every edge, plus the
// index generators n_k (product over half-lines) and ñ_k (over all edges).
ResonanceData resonant_integers(const MetricGraph& g);

// Σ_{j≤N} tan(√μ L_j) − Σ_{j>N} tan(√μ c_j)
double tangent_residual(double mu, const MetricGraph& g, const std::vector<double>& offsets);

// Eigenmodes k = 1..K. With all offsets zero and rational edge ratios the
// generator ñ_k is used (every tangent vanishes); otherwise n_k, and the
// tangent identity is checked at each k.
ModeBasis star_basis(const MetricGraph& g, int K, const std::vector<double>& offsets);

// Largest |tangent_residual| over k = 2..K for each candidate offset vector.
// Exploration only; poles count as +inf.
std::vector<double> scan_offsets(const MetricGraph& g, int K,
                                 const std::vector<std::vector<double>>& candidates);

struct VertexResidual {
  int vertex = 0;
  double continuity = 0.0;
  double kirchhoff = 0.0;
  double neumann = 0.0;
  double dirichlet = 0.0;
};

struct EdgeResidual {
  int edge = 0;
  double periodicity = 0.0;
};

struct SpectralReport {
  double gram_deviation = 0.0;
  bool eigenvalues_sorted = true;
  std::vector<VertexResidual> vertices;
  std::vector<EdgeResidual> periodicity;
  double max_residual = 0.0;
  bool pass = false;
};

// Kirchhoff and Neumann residuals are divided by max(1, √μ_k).
SpectralReport verify_modes(const ModeBasis& b, double tol);

// Gram matrix of the basis under the cell inner product, closed form.
std::vector<std::vector<double>> gram_matrix(const ModeBasis& b);

struct Polynomial;

// ∫ over one cell of edge `edge_pos` of  a(x) * weight(x) * b(x); exact.
double integrate_edge_product(const EigenMode& a, const EigenMode& b, std::size_t edge_pos,
                              double length, const Polynomial& weight);

}  // namespace qgc
