#include "qgc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "qgc/error.hpp"
#include "qgc/polytrig.hpp"

namespace qgc {

namespace {

constexpr double kPi = std::numbers::pi;

struct Harmonic {
  double amplitude;
  double omega;
  double phase;
};

Harmonic as_harmonic(const EdgeForm& f, double freq) {
  switch (f.flavor) {
    case Flavor::Const: return {f.amplitude, 0.0, 0.0};
    case Flavor::Cos: return {f.amplitude, freq, freq * f.shift};
    case Flavor::Sin: return {f.amplitude, freq, freq * f.shift - kPi / 2};
  }
  return {0.0, 0.0, 0.0};
}

struct Rational {
  long long num;
  long long den;
};

std::optional<Rational> reconstruct(double r) {
  // continued-fraction convergents until the approximation is exact to
  // roundoff or the denominator budget is exhausted
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = r;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(x);
    const long long ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0;
    const long long k2 = ai * k1 + k0;
    if (k2 > kMaxDenominator) return std::nullopt;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    const double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::abs(approx - r) <= 1e-12 * std::max(1.0, std::abs(r))) return Rational{h1, k1};
    const double frac = x - a;
    if (frac <= 0.0) return std::nullopt;
    x = 1.0 / frac;
  }
  return std::nullopt;
}

bool checked_mul(long long a, long long b, long long& out) { return !__builtin_mul_overflow(a, b, &out); }

double pole_gap(double arg) {
  // distance from arg to the nearest odd multiple of π/2
  return std::abs(std::remainder(arg - kPi / 2, kPi));
}

}  // namespace

const char* to_string(Flavor f) {
  switch (f) {
    case Flavor::Cos: return "cos";
    case Flavor::Sin: return "sin";
    case Flavor::Const: return "const";
  }
  return "?";
}

const char* to_string(BasisFamily f) {
  switch (f) {
    case BasisFamily::TadpoleCos: return "tadpole_cos";
    case BasisFamily::TadpoleSin: return "tadpole_sin";
    case BasisFamily::StarAssumptionsA: return "star";
  }
  return "?";
}

double EigenMode::value(std::size_t edge_pos, double x) const {
  const EdgeForm& f = edges.at(edge_pos);
  switch (f.flavor) {
    case Flavor::Const: return f.amplitude;
    case Flavor::Cos: return f.amplitude * std::cos(frequency * (x + f.shift));
    case Flavor::Sin: return f.amplitude * std::sin(frequency * (x + f.shift));
  }
  return 0.0;
}

double EigenMode::derivative(std::size_t edge_pos, double x) const {
  const EdgeForm& f = edges.at(edge_pos);
  switch (f.flavor) {
    case Flavor::Const: return 0.0;
    case Flavor::Cos: return -f.amplitude * frequency * std::sin(frequency * (x + f.shift));
    case Flavor::Sin: return f.amplitude * frequency * std::cos(frequency * (x + f.shift));
  }
  return 0.0;
}

std::vector<double> ModeBasis::eigenvalues() const {
  std::vector<double> out;
  out.reserve(modes.size());
  for (const auto& m : modes) out.push_back(m.eigenvalue);
  return out;
}

double integrate_edge_product(const EigenMode& a, const EigenMode& b, std::size_t edge_pos,
                              double length, const Polynomial& weight) {
  const Harmonic ha = as_harmonic(a.edges.at(edge_pos), a.frequency);
  const Harmonic hb = as_harmonic(b.edges.at(edge_pos), b.frequency);
  const double amp = ha.amplitude * hb.amplitude;
  if (amp == 0.0) return 0.0;
  // cos A cos B = (cos(A − B) + cos(A + B)) / 2
  const double diff = integrate_poly_cos(weight, ha.omega - hb.omega, ha.phase - hb.phase, 0.0, length);
  const double sum = integrate_poly_cos(weight, ha.omega + hb.omega, ha.phase + hb.phase, 0.0, length);
  return 0.5 * amp * (diff + sum);
}

ModeBasis tadpole_cos_basis(const MetricGraph& g, int K) {
  if (!is_unit_tadpole(g))
    throw Error(ErrorCode::UnsupportedGraph, "cosine family needs the unit tadpole");
  if (K < 1) throw Error(ErrorCode::InvalidArgument, "K must be positive");
  ModeBasis b{g, BasisFamily::TadpoleCos, {}, std::nullopt};
  const double half_root2 = std::sqrt(2.0) / 2.0;
  b.modes.push_back({1, 0.0, 0.0, {{half_root2, 0.0, Flavor::Const}, {half_root2, 0.0, Flavor::Const}}});
  for (int k = 2; k <= K; ++k) {
    const double n = k - 1;
    b.modes.push_back({k, 4.0 * n * n * kPi * kPi, 2.0 * n * kPi,
                       {{1.0, 0.0, Flavor::Cos}, {1.0, 0.0, Flavor::Cos}}});
  }
  return b;
}

ModeBasis tadpole_sin_basis(const MetricGraph& g, int K) {
  if (!is_unit_tadpole(g))
    throw Error(ErrorCode::UnsupportedGraph, "sine family needs the unit tadpole");
  if (K < 1) throw Error(ErrorCode::InvalidArgument, "K must be positive");
  ModeBasis b{g, BasisFamily::TadpoleSin, {}, std::nullopt};
  const double root2 = std::sqrt(2.0);
  for (int k = 1; k <= K; ++k) {
    const double n = k;
    b.modes.push_back({k, 4.0 * n * n * kPi * kPi, 2.0 * n * kPi,
                       {{root2, 0.0, Flavor::Sin}, {0.0, 0.0, Flavor::Sin}}});
  }
  return b;
}

ResonanceData resonant_integers(const MetricGraph& g) {
  if (g.infinite_count() < 1)
    throw Error(ErrorCode::UnsupportedGraph, "resonant integers need at least one half-line");
  const int N = g.finite_count();
  const double ref = g.edges()[N].length;
  ResonanceData rd;
  rd.reference_period = ref;
  bool finite_rational = true;
  long long inf_prod = 1;
  long long full_prod = 1;
  for (std::size_t j = 0; j < g.edges().size(); ++j) {
    const double ratio = ref / g.edges()[j].length;
    auto q = reconstruct(ratio);
    const bool infinite = static_cast<int>(j) >= N;
    if (!q) {
      if (infinite)
        throw Error(ErrorCode::IrrationalRatio,
                    "period ratio of edge " + std::to_string(g.edges()[j].id) + " is not rational");
      finite_rational = false;
      rd.l.push_back(0);
      rd.numerators.push_back(0);
      continue;
    }
    // ratio = num/den in lowest terms: the smallest l with l·ratio ∈ N* is den
    rd.l.push_back(q->den);
    rd.numerators.push_back(q->num);
    if (!checked_mul(full_prod, q->num, full_prod))
      throw Error(ErrorCode::InvalidArgument, "resonant generator overflows");
    if (infinite && !checked_mul(inf_prod, q->num, inf_prod))
      throw Error(ErrorCode::InvalidArgument, "resonant generator overflows");
  }
  rd.infinite_product = inf_prod;
  if (finite_rational) rd.full_product = full_prod;
  return rd;
}

double tangent_residual(double mu, const MetricGraph& g, const std::vector<double>& offsets) {
  const int N = g.finite_count();
  if (static_cast<int>(offsets.size()) != g.infinite_count())
    throw Error(ErrorCode::DimensionMismatch, "one offset per half-line is required");
  const double root = std::sqrt(mu);
  double acc = 0.0;
  for (int j = 0; j < N; ++j) {
    const double arg = root * g.edges()[j].length;
    if (pole_gap(arg) < kPoleDistance)
      throw Error(ErrorCode::TangentPole, "tan(√μ L_" + std::to_string(j + 1) + ") at a pole");
    acc += std::tan(arg);
  }
  for (std::size_t j = 0; j < offsets.size(); ++j) {
    const double arg = root * offsets[j];
    if (pole_gap(arg) < kPoleDistance)
      throw Error(ErrorCode::TangentPole, "tan(√μ c_" + std::to_string(N + 1 + j) + ") at a pole");
    acc -= std::tan(arg);
  }
  return acc;
}

ModeBasis star_basis(const MetricGraph& g, int K, const std::vector<double>& offsets) {
  if (!is_star(g) || g.infinite_count() < 1)
    throw Error(ErrorCode::UnsupportedGraph, "star basis needs a star with at least one half-line");
  if (K < 1) throw Error(ErrorCode::InvalidArgument, "K must be positive");
  const int N = g.finite_count();
  const std::size_t E = g.edges().size();
  if (static_cast<int>(offsets.size()) != g.infinite_count())
    throw Error(ErrorCode::DimensionMismatch, "one offset per half-line is required");
  for (std::size_t j = 0; j < offsets.size(); ++j) {
    const double L = g.edges()[N + j].length;
    if (!(offsets[j] >= 0.0 && offsets[j] <= L))
      throw Error(ErrorCode::InvalidArgument, "offset c_j must lie in [0, L_j]");
  }

  ResonanceData rd = resonant_integers(g);
  const bool zero_offsets =
      std::all_of(offsets.begin(), offsets.end(), [](double c) { return c == 0.0; });
  const bool rational_case = zero_offsets && rd.full_product.has_value();
  rd.offsets = offsets;

  ModeBasis b{g, BasisFamily::StarAssumptionsA, {}, std::nullopt};
  double total_length = 0.0;
  for (const auto& e : g.edges()) total_length += e.length;
  EigenMode first{1, 0.0, 0.0, {}};
  for (std::size_t j = 0; j < E; ++j)
    first.edges.push_back({1.0 / std::sqrt(total_length), 0.0, Flavor::Const});
  b.modes.push_back(first);
  rd.admissible.push_back(1);

  const double ref = rd.reference_period;
  const Polynomial one{{1.0}};
  for (int k = 2; k <= K; ++k) {
    const double n = static_cast<double>(rational_case ? *rd.n_tilde(k) : rd.n(k));
    const double freq = 2.0 * n * kPi / ref;
    EigenMode m{k, 4.0 * n * n * kPi * kPi / (ref * ref), freq, {}};
    for (std::size_t j = 0; j < E; ++j) {
      const bool infinite = static_cast<int>(j) >= N;
      const double anchor = infinite ? offsets[j - N] : g.edges()[j].length;
      const double c = std::cos(freq * anchor);
      if (std::abs(c) < kCosineFloor)
        throw Error(ErrorCode::CosineDegenerate,
                    "cosine denominator vanishes on edge " + std::to_string(g.edges()[j].id) +
                        " at k = " + std::to_string(k));
      m.edges.push_back({1.0 / c, infinite ? offsets[j - N] : 0.0, Flavor::Cos});
    }
    const double residual = tangent_residual(m.eigenvalue, g, offsets);
    if (std::abs(residual) > kTangentTolerance)
      throw Error(ErrorCode::AssumptionsAViolated,
                  "tangent identity fails at k = " + std::to_string(k) +
                      " (residual " + std::to_string(residual) + ")");
    double norm2 = 0.0;
    for (std::size_t j = 0; j < E; ++j) norm2 += integrate_edge_product(m, m, j, g.edges()[j].length, one);
    double alpha = 1.0 / std::sqrt(norm2);
    if (m.edges.front().amplitude < 0.0) alpha = -alpha;
    for (auto& f : m.edges) f.amplitude *= alpha;
    b.modes.push_back(std::move(m));
    rd.admissible.push_back(k);
  }
  b.resonance = std::move(rd);
  return b;
}

std::vector<double> scan_offsets(const MetricGraph& g, int K,
                                 const std::vector<std::vector<double>>& candidates) {
  ResonanceData rd = resonant_integers(g);
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    double worst = 0.0;
    for (int k = 2; k <= K && std::isfinite(worst); ++k) {
      const double freq = 2.0 * static_cast<double>(rd.n(k)) * kPi / rd.reference_period;
      try {
        worst = std::max(worst, std::abs(tangent_residual(freq * freq, g, c)));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::TangentPole) throw;
        worst = std::numeric_limits<double>::infinity();
      }
    }
    out.push_back(worst);
  }
  return out;
}

std::vector<std::vector<double>> gram_matrix(const ModeBasis& b) {
  const std::size_t K = b.size();
  const Polynomial one{{1.0}};
  std::vector<std::vector<double>> G(K, std::vector<double>(K, 0.0));
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = i; j < K; ++j) {
      double acc = 0.0;
      for (std::size_t e = 0; e < b.graph.edges().size(); ++e)
        acc += integrate_edge_product(b.modes[i], b.modes[j], e, b.graph.edges()[e].length, one);
      G[i][j] = G[j][i] = acc;
    }
  }
  return G;
}

SpectralReport verify_modes(const ModeBasis& b, double tol) {
  SpectralReport rep;
  const auto& g = b.graph;

  const auto G = gram_matrix(b);
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = 0; j < G.size(); ++j)
      rep.gram_deviation = std::max(rep.gram_deviation, std::abs(G[i][j] - (i == j ? 1.0 : 0.0)));

  for (std::size_t i = 1; i < b.modes.size(); ++i)
    if (b.modes[i].eigenvalue < b.modes[i - 1].eigenvalue) rep.eigenvalues_sorted = false;

  for (const auto& v : g.vertices()) {
    VertexResidual vr{v.id};
    for (const auto& mode : b.modes) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      double flux = 0.0;
      // derivatives grow like √μ; compare them at unit scale
      const double dscale = std::max(1.0, mode.frequency);
      for (const auto& inc : v.incident) {
        auto pos = g.edge_position(inc.edge);
        if (!pos) continue;
        const double L = g.edges()[*pos].length;
        const double x = inc.end == EdgeEnd::Start ? 0.0 : L;
        const double val = mode.value(*pos, x);
        // derivative taken in the direction away from the vertex
        const double out = (inc.end == EdgeEnd::Start ? mode.derivative(*pos, x) : -mode.derivative(*pos, x)) / dscale;
        lo = std::min(lo, val);
        hi = std::max(hi, val);
        flux += out;
        if (v.bc == BoundaryCondition::Neumann) vr.neumann = std::max(vr.neumann, std::abs(out));
        if (v.bc == BoundaryCondition::Dirichlet) vr.dirichlet = std::max(vr.dirichlet, std::abs(val));
      }
      if (v.incident.size() > 1) vr.continuity = std::max(vr.continuity, hi - lo);
      if (v.bc == BoundaryCondition::NeumannKirchhoff) vr.kirchhoff = std::max(vr.kirchhoff, std::abs(flux));
    }
    rep.max_residual = std::max({rep.max_residual, vr.continuity, vr.kirchhoff, vr.neumann, vr.dirichlet});
    rep.vertices.push_back(vr);
  }

  for (std::size_t p = g.finite_count(); p < g.edges().size(); ++p) {
    EdgeResidual er{g.edges()[p].id};
    for (const auto& mode : b.modes) {
      const auto& f = mode.edges[p];
      if (f.flavor == Flavor::Const || f.amplitude == 0.0) continue;
      const double turns = std::fmod(mode.frequency * g.edges()[p].length, 2.0 * kPi);
      er.periodicity = std::max(er.periodicity, std::min(std::abs(turns), 2.0 * kPi - std::abs(turns)));
    }
    rep.max_residual = std::max(rep.max_residual, er.periodicity);
    rep.periodicity.push_back(er);
  }

  rep.max_residual = std::max(rep.max_residual, rep.gram_deviation);
  rep.pass = rep.eigenvalues_sorted && rep.max_residual <= tol;
  return rep;
}

}  // namespace qgc
