#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "qgc/control_operator.hpp"
#include "qgc/error.hpp"

using namespace qgc;

namespace {

constexpr double pi = std::numbers::pi;

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

const MetricGraph& tadpole() {
  static const MetricGraph g = build_tadpole(1.0, 1.0);
  return g;
}

double quad_quartic_cos(int j, int k) {
  // both tadpole edges carry the same cosine and the same quartic cell
  oracle::real acc = 0;
  for (int e = 0; e < 2; ++e)
    acc += oracle::integrate_split(
        [&](oracle::real x) { return oracle::tadpole_cos(j, e, x) * oracle::quartic(x) * oracle::tadpole_cos(k, e, x); },
        0, 1, 8);
  return static_cast<double>(acc);
}

}  // namespace

TEST_CASE("potential evaluation") {
  const Potential q = make_potential(PotentialKind::TadpoleQuartic, tadpole());
  CHECK(q.value(0, 0.5) == doctest::Approx(1.0 / 16).epsilon(1e-15));
  CHECK(q.value(1, 1.5) == doctest::Approx(1.0 / 16).epsilon(1e-15));
  CHECK(q.value(1, 7.25) == doctest::Approx(q.value(0, 0.25)).epsilon(1e-14));

  const Potential b = make_potential(PotentialKind::TadpoleBridge, tadpole());
  for (double x : {0.0, 0.3, 2.7, 11.5}) CHECK(b.value(1, x) == 0.0);
  CHECK(b.value(0, 0.5) == doctest::Approx(0.25).epsilon(1e-15));

  const Potential c = make_potential(PotentialKind::TadpoleCombined, tadpole());
  CHECK(c.value(0, 0.5) == doctest::Approx(0.25 + 1.0 / 16).epsilon(1e-15));
  CHECK(c.value(1, 0.5) == doctest::Approx(1.0 / 16).epsilon(1e-15));

  const MetricGraph star = build_star({2.0}, {1.0});
  const Potential s = make_potential(PotentialKind::StarQuartic, star);
  CHECK(s.value(0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));  // 1²(1 − 2)²
  CHECK(s.value(1, 3.5) == doctest::Approx(1.0 / 16).epsilon(1e-15));
}

TEST_CASE("potentials check the graph shape") {
  CHECK(code_of([] { make_potential(PotentialKind::TadpoleQuartic, build_star({1.0}, {1.0})); }) ==
        ErrorCode::IncompatibleGraph);
  CHECK(code_of([] { make_potential(PotentialKind::TadpoleBridge, build_tadpole(2.0, 1.0)); }) ==
        ErrorCode::IncompatibleGraph);
  CHECK(code_of([] { make_potential(PotentialKind::StarQuartic, build_tadpole(1.0, 1.0)); }) ==
        ErrorCode::IncompatibleGraph);
}

TEST_CASE("custom potentials") {
  const Potential p = make_custom_potential(tadpole(), {{0.0, 1.0}, {0.0, 1.0, -1.0}});
  CHECK(p.value(0, 0.25) == doctest::Approx(0.25));
  CHECK(p.value(1, 1.5) == doctest::Approx(0.25));
  // x on the tail jumps from 1 back to 0 at every cell boundary
  CHECK(code_of([] { make_custom_potential(tadpole(), {{0.0}, {0.0, 1.0}}); }) == ErrorCode::InvalidPotential);
  CHECK(code_of([] { make_custom_potential(tadpole(), {{0.0}}); }) == ErrorCode::InvalidPotential);
  CHECK(potential_kind_from_string("star_quartic") == PotentialKind::StarQuartic);
  CHECK(code_of([] { potential_kind_from_string("quartic"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("quartic tadpole matrix elements in closed form") {
  const ModeBasis b = tadpole_cos_basis(tadpole(), 40);
  const Potential V = make_potential(PotentialKind::TadpoleQuartic, tadpole());
  CHECK(matrix_element(b, V, 1, 1) == doctest::Approx(1.0 / 30).epsilon(1e-15));
  for (int k = 2; k <= 40; ++k) {
    const double closed = -3 * std::sqrt(2.0) / (2 * std::pow(pi, 4) * std::pow(k - 1.0, 4));
    CHECK(matrix_element(b, V, k, 1) == doctest::Approx(closed).epsilon(1e-11));
    const double diag = 1.0 / 30 - 3 / (32 * std::pow(pi, 4) * std::pow(k - 1.0, 4));
    CHECK(matrix_element(b, V, k, k) == doctest::Approx(diag).epsilon(1e-13));
  }
  // the hand integration by parts agrees with quadrature
  for (int n = 1; n <= 10; ++n) {
    const auto q = oracle::integrate_split(
        [&](oracle::real x) { return oracle::quartic(x) * std::cos(2 * n * oracle::pi * x); }, 0, 1, 8);
    CHECK(double(q) == doctest::Approx(double(oracle::quartic_cos_moment(n))).epsilon(1e-12));
  }
}

TEST_CASE("assembled matrix against quadrature") {
  const ModeBasis b = tadpole_cos_basis(tadpole(), 20);
  const Potential V = make_potential(PotentialKind::TadpoleQuartic, tadpole());
  SUBCASE("K = 1") {
    const BMatrix B = assemble_b(b, V, 1);
    REQUIRE(B.K() == 1);
    CHECK(B.entries(0, 0) == doctest::Approx(1.0 / 30).epsilon(1e-15));
  }
  SUBCASE("K = 20 entrywise") {
    const BMatrix B = assemble_b(b, V, 20);
    double worst = 0.0;
    for (int j = 1; j <= 20; ++j)
      for (int k = j; k <= 20; ++k) worst = std::max(worst, std::abs(B.entries(j - 1, k - 1) - quad_quartic_cos(j, k)));
    CHECK(worst < 1e-12);
    CHECK((B.entries.array() == B.entries.transpose().array()).all());
  }
  SUBCASE("zero potential") {
    const BMatrix Z = assemble_b(b, make_potential(PotentialKind::Zero, tadpole()), 8);
    CHECK(Z.entries.isZero(0.0));
  }
  SUBCASE("K beyond the basis") {
    CHECK(code_of([&] { assemble_b(b, V, 21); }) == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("bridge potential in the sine family") {
  const ModeBasis b = tadpole_sin_basis(tadpole(), 30);
  const Potential V = make_potential(PotentialKind::TadpoleBridge, tadpole());
  const BMatrix B = assemble_b(b, V, 30);
  CHECK(B.entries(0, 0) == doctest::Approx(1.0 / 6 + 1 / (8 * pi * pi)).epsilon(1e-14));
  for (int k = 2; k <= 30; ++k) {
    const double closed = -(1 / (2 * pi * pi)) * 4.0 * k / (std::pow(k - 1.0, 2) * std::pow(k + 1.0, 2));
    CHECK(B.entries(k - 1, 0) == doctest::Approx(closed).epsilon(1e-11));
  }
  // and by quadrature of the written-out modes
  for (int k = 1; k <= 10; ++k) {
    const auto q = oracle::integrate_split(
        [&](oracle::real x) { return oracle::tadpole_sin(k, 0, x) * x * (1 - x) * oracle::tadpole_sin(1, 0, x); }, 0, 1, 8);
    CHECK(std::abs(B.entries(k - 1, 0) - double(q)) < 1e-13);
  }
}

TEST_CASE("star quartic against quadrature") {
  const MetricGraph g = build_star({1.0, 0.5}, {1.0});
  const ModeBasis b = star_basis(g, 10, {0.0});
  const BMatrix B = assemble_b(b, make_potential(PotentialKind::StarQuartic, g), 10);
  for (int j = 1; j <= 10; ++j)
    for (int k = j; k <= 10; ++k) {
      oracle::real acc = 0;
      for (std::size_t e = 0; e < 3; ++e) {
        const double L = g.edges()[e].length;
        acc += oracle::integrate_split(
            [&](oracle::real x) {
              const double xd = static_cast<double>(x);
              return b.modes[j - 1].value(e, xd) * oracle::quartic(x, L) * b.modes[k - 1].value(e, xd);
            },
            0, L, 8);
      }
      CHECK(std::abs(B.entries(j - 1, k - 1) - double(acc)) < 1e-12);
    }
}

TEST_CASE("hs_norm") {
  using cd = std::complex<double>;
  const std::vector<cd> delta{1.0, 0.0, 0.0, 0.0};
  for (double s : {0.0, 3.0, 4.0}) CHECK(hs_norm(delta, s) == 1.0);

  std::vector<cd> c{cd(0.3, -0.1), cd(0.0, 0.2), cd(-0.05, 0.0)};
  std::vector<cd> c2;
  for (auto z : c) c2.push_back(2.0 * z);
  CHECK(hs_norm(c2, 3.0) == doctest::Approx(2 * hs_norm(c, 3.0)).epsilon(1e-15));

  std::vector<cd> inv;
  for (int k = 1; k <= 4; ++k) inv.push_back(std::pow(k, -5.0));
  CHECK(hs_norm(inv, 4.0) == doctest::Approx(std::sqrt(1 + 1.0 / 4 + 1.0 / 9 + 1.0 / 16)).epsilon(1e-15));

  double e2 = 0;
  for (auto z : c) e2 += std::norm(z);
  CHECK(hs_norm(c, 0.0) == doctest::Approx(std::sqrt(e2)).epsilon(1e-15));
}
