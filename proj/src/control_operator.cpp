#include "qgc/control_operator.hpp"

#include <cmath>

#include "qgc/error.hpp"

namespace qgc {

namespace {

// x^2 (x - L)^2 = L^2 x^2 - 2L x^3 + x^4
Polynomial quartic_well(double L) { return Polynomial{{0.0, 0.0, L * L, -2.0 * L, 1.0}}; }

// x (1 - x)
Polynomial bridge() { return Polynomial{{0.0, 1.0, -1.0}}; }

Polynomial zero() { return Polynomial{{0.0}}; }

}  // namespace

const char* to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::TadpoleQuartic: return "tadpole_quartic";
    case PotentialKind::TadpoleBridge: return "tadpole_bridge";
    case PotentialKind::TadpoleCombined: return "tadpole_combined";
    case PotentialKind::StarQuartic: return "star_quartic";
    case PotentialKind::Zero: return "zero";
    case PotentialKind::Custom: return "custom";
  }
  return "?";
}

PotentialKind potential_kind_from_string(const std::string& s) {
  for (auto k : {PotentialKind::TadpoleQuartic, PotentialKind::TadpoleBridge, PotentialKind::TadpoleCombined,
                 PotentialKind::StarQuartic, PotentialKind::Zero, PotentialKind::Custom})
    if (s == to_string(k)) return k;
  throw Error(ErrorCode::InvalidArgument, "unknown potential kind '" + s + "'");
}

double Potential::value(std::size_t edge_pos, double x) const {
  const double L = periods.at(edge_pos);
  if (periodic.at(edge_pos)) {
    x = std::fmod(x, L);
    if (x < 0.0) x += L;
  }
  return cells.at(edge_pos)(x);
}

Potential make_potential(PotentialKind kind, const MetricGraph& g) {
  Potential V;
  V.kind = kind;
  for (const auto& e : g.edges()) {
    V.periods.push_back(e.length);
    V.periodic.push_back(e.kind == EdgeKind::InfinitePeriodic);
  }
  const bool tadpole_kind = kind == PotentialKind::TadpoleQuartic || kind == PotentialKind::TadpoleBridge ||
                            kind == PotentialKind::TadpoleCombined;
  if (tadpole_kind && !is_unit_tadpole(g))
    throw Error(ErrorCode::IncompatibleGraph, std::string(to_string(kind)) + " needs the unit tadpole");
  if (kind == PotentialKind::StarQuartic && !is_star(g))
    throw Error(ErrorCode::IncompatibleGraph, "star_quartic needs a star graph");
  if (kind == PotentialKind::Custom)
    throw Error(ErrorCode::InvalidArgument, "custom potentials need coefficients");

  switch (kind) {
    case PotentialKind::TadpoleQuartic:
      V.cells = {quartic_well(1.0), quartic_well(1.0)};
      break;
    case PotentialKind::TadpoleBridge:
      V.cells = {bridge(), zero()};
      break;
    case PotentialKind::TadpoleCombined:
      V.cells = {bridge() + quartic_well(1.0), quartic_well(1.0)};
      break;
    case PotentialKind::StarQuartic:
      for (const auto& e : g.edges()) V.cells.push_back(quartic_well(e.length));
      break;
    case PotentialKind::Zero:
      V.cells.assign(g.edges().size(), zero());
      break;
    case PotentialKind::Custom:
      break;
  }
  return V;
}

Potential make_custom_potential(const MetricGraph& g, const std::vector<std::vector<double>>& coeffs) {
  if (coeffs.size() != g.edges().size())
    throw Error(ErrorCode::InvalidPotential, "custom potential needs one coefficient list per edge");
  Potential V;
  V.kind = PotentialKind::Custom;
  for (std::size_t p = 0; p < g.edges().size(); ++p) {
    const auto& e = g.edges()[p];
    Polynomial cell{coeffs[p]};
    if (cell.coeffs.empty()) cell.coeffs.push_back(0.0);
    for (double c : cell.coeffs)
      if (!std::isfinite(c)) throw Error(ErrorCode::InvalidPotential, "non-finite coefficient");
    if (e.kind == EdgeKind::InfinitePeriodic) {
      const double a = cell(0.0);
      const double b = cell(e.length);
      if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a)))
        throw Error(ErrorCode::InvalidPotential,
                    "periodized cell on edge " + std::to_string(e.id) + " is discontinuous");
    }
    V.cells.push_back(std::move(cell));
    V.periods.push_back(e.length);
    V.periodic.push_back(e.kind == EdgeKind::InfinitePeriodic);
  }
  return V;
}

double matrix_element(const ModeBasis& b, const Potential& V, int j, int k) {
  if (j < 1 || k < 1 || j > static_cast<int>(b.size()) || k > static_cast<int>(b.size()))
    throw Error(ErrorCode::DimensionMismatch, "mode index out of range");
  if (V.cells.size() != b.graph.edges().size())
    throw Error(ErrorCode::DimensionMismatch, "potential and basis live on different graphs");
  double acc = 0.0;
  for (std::size_t e = 0; e < b.graph.edges().size(); ++e)
    acc += integrate_edge_product(b.modes[j - 1], b.modes[k - 1], e, b.graph.edges()[e].length, V.cells[e]);
  return acc;
}

BMatrix assemble_b(const ModeBasis& b, const Potential& V, int K) {
  if (K < 1 || K > static_cast<int>(b.size()))
    throw Error(ErrorCode::DimensionMismatch, "K exceeds the number of modes");
  BMatrix m;
  m.family = b.family;
  m.potential = V.kind;
  m.entries.resize(K, K);
  for (int j = 1; j <= K; ++j) {
    for (int k = j; k <= K; ++k) {
      const double v = matrix_element(b, V, j, k);
      m.entries(j - 1, k - 1) = v;
      m.entries(k - 1, j - 1) = v;
    }
  }
  return m;
}

double hs_norm(std::span<const std::complex<double>> coeffs, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double w = std::pow(static_cast<double>(i + 1), s);
    acc += std::norm(coeffs[i]) * w * w;
  }
  return std::sqrt(acc);
}

double hs_norm(const Eigen::VectorXcd& coeffs, double s) {
  return hs_norm(std::span<const std::complex<double>>(coeffs.data(), static_cast<std::size_t>(coeffs.size())), s);
}

}  // namespace qgc
