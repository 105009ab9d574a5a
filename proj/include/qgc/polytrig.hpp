#pragma once

#include <vector>

namespace qgc {

// Real polynomial, coefficients in ascending powers.
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double x) const;
  Polynomial derivative() const;
  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  int degree() const;
  bool is_zero() const;
};

// exact integral of p over [a, b]
double integrate(const Polynomial& p, double a, double b);

/// Closed-form value of  ∫_a^b p(x) cos(ωx + θ) dx.
///
/// Uses the tabular integration-by-parts antiderivative
///   Σ_n p^(n)(x) g_n(ωx + θ) / ω^(n+1),  g = (sin, cos, -sin, -cos, ...),
/// which terminates after deg(p) + 1 terms. When |ω|·max(|a|,|b|) < 1 the
/// 1/ω^n factors would cancel badly, so the cosine is expanded in its power
/// series instead and integrated term by term against p.
double integrate_poly_cos(const Polynomial& p, double omega, double phase, double a, double b);

}  // namespace qgc
