#include "qgc/polytrig.hpp"

#include <algorithm>
#include <cmath>

namespace qgc {

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (std::size_t i = 1; i < coeffs.size(); ++i) d.coeffs.push_back(coeffs[i] * static_cast<double>(i));
  return d;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial r;
  r.coeffs.assign(std::max(coeffs.size(), other.coeffs.size()), 0.0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] += coeffs[i];
  for (std::size_t i = 0; i < other.coeffs.size(); ++i) r.coeffs[i] += other.coeffs[i];
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (coeffs.empty() || other.coeffs.empty()) return {};
  Polynomial r;
  r.coeffs.assign(coeffs.size() + other.coeffs.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    for (std::size_t j = 0; j < other.coeffs.size(); ++j) r.coeffs[i + j] += coeffs[i] * other.coeffs[j];
  return r;
}

int Polynomial::degree() const {
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
    if (coeffs[i] != 0.0) return i;
  return -1;
}

bool Polynomial::is_zero() const { return degree() < 0; }

double integrate(const Polynomial& p, double a, double b) {
  double acc = 0.0;
  double pa = a, pb = b;
  for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
    acc += p.coeffs[i] * (pb - pa) / static_cast<double>(i + 1);
    pa *= a;
    pb *= b;
  }
  return acc;
}

namespace {

// ∫_a^b p(x) x^m dx
double moment(const Polynomial& p, int m, double a, double b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
    if (p.coeffs[i] == 0.0) continue;
    const int e = static_cast<int>(i) + m + 1;
    acc += p.coeffs[i] * (std::pow(b, e) - std::pow(a, e)) / e;
  }
  return acc;
}

double series_branch(const Polynomial& p, double omega, double phase, double a, double b) {
  // cos(ωx + θ) = cosθ Σ (-1)^n (ωx)^{2n}/(2n)! - sinθ Σ (-1)^n (ωx)^{2n+1}/(2n+1)!
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  double acc = 0.0;
  double scale = 1.0;  // ω^m / m!
  for (int m = 0; m < 80; ++m) {
    if (m > 0) scale *= omega / m;
    const double mom = moment(p, m, a, b);
    double term = 0.0;
    if (m % 2 == 0)
      term = c * ((m / 2) % 2 == 0 ? 1.0 : -1.0) * scale * mom;
    else
      term = -s * (((m - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * scale * mom;
    acc += term;
    if (m > p.degree() + 4 && std::abs(scale * mom) <= 1e-20 * (std::abs(acc) + 1e-300)) break;
    if (scale == 0.0) break;
  }
  return acc;
}

double tabular_antiderivative(const Polynomial& p, double omega, double phase, double x) {
  const double arg = omega * x + phase;
  const double sn = std::sin(arg);
  const double cs = std::cos(arg);
  double acc = 0.0;
  double inv = 1.0 / omega;
  Polynomial d = p;
  for (int n = 0; !d.coeffs.empty(); ++n) {
    double g = 0.0;
    switch (n % 4) {
      case 0: g = sn; break;
      case 1: g = cs; break;
      case 2: g = -sn; break;
      default: g = -cs; break;
    }
    acc += d(x) * g * inv;
    inv /= omega;
    d = d.derivative();
  }
  return acc;
}

}  // namespace

double integrate_poly_cos(const Polynomial& p, double omega, double phase, double a, double b) {
  if (p.is_zero()) return 0.0;
  if (omega == 0.0) return std::cos(phase) * integrate(p, a, b);
  const double reach = std::abs(omega) * std::max(std::abs(a), std::abs(b));
  if (reach < 1.0) return series_branch(p, omega, phase, a, b);
  return tabular_antiderivative(p, omega, phase, b) - tabular_antiderivative(p, omega, phase, a);
}

}  // namespace qgc
