#include "qgc/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "qgc/error.hpp"

namespace qgc {

namespace {

void require_increasing(std::span<const double> mus) {
  for (std::size_t i = 1; i < mus.size(); ++i)
    if (!(mus[i] > mus[i - 1]))
      throw Error(ErrorCode::NotSorted, "eigenvalues must be strictly increasing (index " +
                                            std::to_string(i + 1) + ")");
}

bool lex_less(const ResonantQuadruple& a, const ResonantQuadruple& b) {
  return std::tie(a.j, a.k, a.l, a.m) < std::tie(b.j, b.k, b.l, b.m);
}

}  // namespace

GapResult spectral_gap(std::span<const double> mus, int M) {
  if (M < 1) throw Error(ErrorCode::InvalidArgument, "shift M must be positive");
  if (mus.size() <= static_cast<std::size_t>(M))
    throw Error(ErrorCode::InvalidArgument, "need more than M eigenvalues");
  require_increasing(mus);
  GapResult r{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t k = 0; k + M < mus.size(); ++k) {
    const double gap = mus[k + M] - mus[k];
    if (gap < r.value) r = {gap, static_cast<int>(k) + 1};
  }
  return r;
}

DecayFit decay_fit(std::span<const double> column, double p) {
  if (column.size() < 2) throw Error(ErrorCode::InvalidArgument, "decay fit needs at least two entries");
  DecayFit fit{p, std::numeric_limits<double>::infinity(), 0, false};
  for (std::size_t i = 0; i < column.size(); ++i) {
    const double scaled = std::abs(column[i]) * std::pow(static_cast<double>(i + 1), p);
    // ties keep the largest k, the end where the bound is tightest
    if (scaled <= fit.C_est) {
      fit.C_est = scaled;
      fit.witness = static_cast<int>(i) + 1;
    }
  }
  fit.pass = fit.C_est > 0.0;
  return fit;
}

std::vector<ResonantQuadruple> find_resonances(std::span<const double> mus, int K, double tol) {
  if (K < 0 || static_cast<std::size_t>(K) > mus.size())
    throw Error(ErrorCode::DimensionMismatch, "K exceeds the eigenvalue list");
  require_increasing(mus.first(K));
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "resonance tolerance must be positive");

  struct Pair {
    int j, k;
    double gap;
  };
  std::unordered_map<long long, std::vector<Pair>> bins;
  std::vector<ResonantQuadruple> out;
  for (int j = 1; j <= K; ++j) {
    for (int k = j + 1; k <= K; ++k) {
      const double gap = mus[k - 1] - mus[j - 1];
      const auto key = static_cast<long long>(std::floor(gap / tol));
      for (long long b = key - 1; b <= key + 1; ++b) {
        auto it = bins.find(b);
        if (it == bins.end()) continue;
        for (const Pair& q : it->second) {
          // μ_j − μ_k = μ_l − μ_m  ⇔  gap(j,k) = gap(l,m)
          const double defect = std::abs(gap - q.gap);
          if (defect <= tol) out.push_back({q.j, q.k, j, k, defect, 0.0});
        }
      }
      bins[key].push_back({j, k, gap});
    }
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

std::vector<ResonantQuadruple> find_resonances_exact(std::span<const long long> levels, int K) {
  if (K < 0 || static_cast<std::size_t>(K) > levels.size())
    throw Error(ErrorCode::DimensionMismatch, "K exceeds the level list");
  std::unordered_map<long long, std::vector<std::pair<int, int>>> by_gap;
  std::vector<ResonantQuadruple> out;
  for (int j = 1; j <= K; ++j) {
    for (int k = j + 1; k <= K; ++k) {
      const long long gap = levels[k - 1] - levels[j - 1];
      auto& bucket = by_gap[gap];
      for (const auto& [l0, m0] : bucket) out.push_back({l0, m0, j, k, 0.0, 0.0});
      bucket.emplace_back(j, k);
    }
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

std::optional<std::vector<long long>> integer_levels(std::span<const double> mus) {
  const double unit = 4.0 * std::numbers::pi * std::numbers::pi;
  std::vector<long long> out;
  out.reserve(mus.size());
  for (double mu : mus) {
    const double r = mu / unit;
    const double n = std::round(r);
    if (std::abs(r - n) > 1e-9 * std::max(1.0, std::abs(r))) return std::nullopt;
    out.push_back(static_cast<long long>(n));
  }
  return out;
}

double diagonal_combination(std::span<const double> b_diag, const ResonantQuadruple& q) {
  const auto at = [&](int i) {
    if (i < 1 || static_cast<std::size_t>(i) > b_diag.size())
      throw Error(ErrorCode::DimensionMismatch, "quadruple index outside the diagonal");
    return b_diag[i - 1];
  };
  return at(q.j) - at(q.k) - at(q.l) + at(q.m);
}

MarginResult nonresonance_margin(std::span<const double> b_diag, std::vector<ResonantQuadruple>& quads,
                                 double threshold) {
  MarginResult r;
  if (quads.empty()) {
    r.vacuous = true;
    r.pass = true;
    return r;
  }
  r.min_abs = std::numeric_limits<double>::infinity();
  for (auto& q : quads) {
    q.combination = diagonal_combination(b_diag, q);
    if (std::abs(q.combination) < r.min_abs) {
      r.min_abs = std::abs(q.combination);
      r.witness = q;
    }
  }
  r.pass = r.min_abs > threshold;
  return r;
}

HypothesisReport check_hypotheses(std::span<const double> mus, const BMatrix& B, const HypothesisOptions& opt) {
  const int K = B.K();
  if (static_cast<int>(mus.size()) < K)
    throw Error(ErrorCode::DimensionMismatch, "fewer eigenvalues than matrix rows");
  if (K < 2) throw Error(ErrorCode::InvalidArgument, "hypothesis checks need K >= 2");
  const auto mu = mus.first(K);

  HypothesisReport rep;
  rep.K = K;
  rep.M = opt.M;
  rep.gap_1 = spectral_gap(mu, 1);
  rep.gap_pass = rep.gap_1.value > 0.0;
  if (K > opt.M) {
    rep.gap_M = spectral_gap(mu, opt.M);
    rep.gap_M_pass = rep.gap_M.value > 0.0;
  }

  const Eigen::VectorXd col = B.first_column();
  rep.decay = decay_fit(std::span<const double>(col.data(), K), opt.decay_p);

  rep.resonance_tolerance = kRelativeResonanceTolerance * mu[K - 1];
  rep.resonances = find_resonances(mu, K, rep.resonance_tolerance);
  const Eigen::VectorXd diag = B.diagonal();
  rep.margin = nonresonance_margin(std::span<const double>(diag.data(), K), rep.resonances);

  if (auto levels = integer_levels(mu)) {
    const auto exact = find_resonances_exact(*levels, K);
    rep.exact_resonances_agree = exact == rep.resonances;
  }

  rep.pass = rep.gap_pass && rep.gap_M_pass && rep.decay.pass && rep.margin.pass &&
             rep.exact_resonances_agree.value_or(true);
  return rep;
}

}  // namespace qgc
