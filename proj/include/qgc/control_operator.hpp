#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qgc/graph.hpp"
#include "qgc/polytrig.hpp"
#include "qgc/spectral.hpp"

namespace qgc {

enum class PotentialKind { TadpoleQuartic, TadpoleBridge, TadpoleCombined, StarQuartic, Zero, Custom };
const char* to_string(PotentialKind k);
PotentialKind potential_kind_from_string(const std::string& s);

// Multiplication potential, one polynomial per edge. On a finite edge it is
// the polynomial on [0, L_j]; on a half-line it is the cell polynomial on
// [0, L_j] repeated with period L_j.
struct Potential {
  PotentialKind kind = PotentialKind::Zero;
  std::vector<Polynomial> cells;
  std::vector<double> periods;  // L_j per edge
  std::vector<bool> periodic;

  double value(std::size_t edge_pos, double x) const;
};

Potential make_potential(PotentialKind kind, const MetricGraph& g);
Potential make_custom_potential(const MetricGraph& g, const std::vector<std::vector<double>>& coeffs);

// ⟨φ_j, V φ_k⟩ with 1-based indices, summed over one cell per edge
double matrix_element(const ModeBasis& b, const Potential& V, int j, int k);

struct BMatrix {
  Eigen::MatrixXd entries;
  BasisFamily family = BasisFamily::TadpoleCos;
  PotentialKind potential = PotentialKind::Zero;

  int K() const { return static_cast<int>(entries.rows()); }
  Eigen::VectorXd first_column() const { return entries.col(0); }
  Eigen::VectorXd diagonal() const { return entries.diagonal(); }
};

BMatrix assemble_b(const ModeBasis& b, const Potential& V, int K);

double hs_norm(std::span<const std::complex<double>> coeffs, double s);
double hs_norm(const Eigen::VectorXcd& coeffs, double s);

}  // namespace qgc
