#include <doctest.h>

#include <cmath>
#include <numbers>

#include "discofield/hermite.hpp"
#include "discofield/rng.hpp"

using namespace discofield;

namespace {

// Test-local recurrence oracle, independent of the library walk.
double hermite_oracle(int n, double u) {
  if (n == 0) return 1.0;
  if (n == 1) return 2.0 * u;
  return 2.0 * u * hermite_oracle(n - 1, u) - 2.0 * (n - 1) * hermite_oracle(n - 2, u);
}

// Trapezoid Fourier integral, written against eval_phi only.
Complex ft_oracle(const HermiteState& state, double p) {
  const double dx = state.params.sigma_x();
  const double half = 14.0 * dx;
  const int m = 8193;
  const double h = 2.0 * half / (m - 1);
  Complex acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = state.params.mean_x - half + i * h;
    Complex f = eval_phi(state, x) *
                Complex{std::cos(p * x), -std::sin(p * x)};
    if (i == 0 || i == m - 1) f *= 0.5;
    acc += f;
  }
  return acc * h / std::sqrt(2.0 * std::numbers::pi);
}

GaussianParams random_family(const CounterRng& rng, std::uint64_t i) {
  return {rng.uniform(1, i, -3.0, 3.0), rng.uniform(2, i, -3.0, 3.0),
          std::exp(rng.uniform(3, i, std::log(0.1), std::log(10.0)))};
}

}  // namespace

TEST_CASE("hermite polynomial values and recurrence oracle") {
  CHECK(hermite_polynomial(0, 0.7) == 1.0);
  CHECK(hermite_polynomial(1, 0.5) == 1.0);
  CHECK(hermite_polynomial(3, 1.0) == doctest::Approx(-4.0).epsilon(1e-14));
  for (int n = 0; n <= 12; ++n)
    for (double u : {-2.3, -0.4, 0.0, 0.9, 3.1})
      CHECK(hermite_polynomial(n, u) ==
            doctest::Approx(hermite_oracle(n, u)).epsilon(1e-12));
  CHECK_THROWS_AS(hermite_polynomial(-1, 0.0), std::invalid_argument);
}

TEST_CASE("normalized hermite matches scaled raw polynomial") {
  for (int n = 0; n <= 15; ++n) {
    const double scale = std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0) *
                                   std::sqrt(std::numbers::pi));
    for (double u : {-1.7, 0.3, 2.2})
      CHECK(hermite_orthonormal(n, u) ==
            doctest::Approx(hermite_polynomial(n, u) / scale).epsilon(1e-12));
  }
}

TEST_CASE("hermite functions stay finite far beyond the naive-factorial range") {
  CHECK(std::isfinite(hermite_function(500, 1.3)));
  CHECK(std::isfinite(hermite_function(2000, 40.0)));
  CHECK(hermite_function(64, 0.5) == doctest::Approx(
            hermite_orthonormal(64, 0.5) * std::exp(-0.125)).epsilon(1e-12));
}

TEST_CASE("gauss-hermite rule integrates the weight and low moments") {
  for (int order : {1, 2, 5, 16, 64, 160}) {
    const auto rule = gauss_hermite(order);
    double w = 0.0, w2 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      w += rule.weights[i];
      w2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    }
    CHECK(w == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
    if (order >= 2)
      CHECK(w2 == doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(gauss_hermite(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_hermite(301), std::invalid_argument);
}

TEST_CASE("wave function values: frozen densities and phases") {
  const HermiteState ground{0, {0.0, 0.0, 0.5}};
  // |phi_0(0)|^2 = 1/(sqrt(2 pi) dx) with dx = 1.
  CHECK(std::norm(eval_phi(ground, 0.0)) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-12));
  CHECK(eval_phi(ground, 0.0).real() > 0.0);

  const HermiteState excited{1, {0.4, 1.3, 2.0}};
  CHECK(std::abs(eval_phi(excited, 0.4)) < 1e-15);

  const HermiteState moving{0, {0.0, 2.0, 0.5}};
  CHECK(std::arg(eval_phi(moving, 1.0)) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("momentum-space wave function: frozen density and odd zero") {
  const HermiteState ground{0, {0.0, 0.0, 0.5}};
  // |phi~_0(0)|^2 = 1/(sqrt(2 pi) dp) with dp = 0.5.
  CHECK(std::norm(eval_phi_momentum(ground, 0.0)) ==
        doctest::Approx(0.7978845608028654).epsilon(1e-12));
  const HermiteState excited{1, {0.7, -0.9, 1.1}};
  CHECK(std::abs(eval_phi_momentum(excited, -0.9)) < 1e-15);
}

TEST_CASE("closed-form transform agrees with the quadrature oracle") {
  const CounterRng rng(71);
  double worst = 0.0;
  for (int n = 0; n <= 8; ++n) {
    const HermiteState state{n, {0.3, -0.8, 0.7}};
    for (int i = 0; i < 50; ++i) {
      const double p = state.params.mean_p +
                       state.params.sigma_p * rng.uniform(4, 50 * n + i, -4.0, 4.0);
      worst = std::max(worst, std::abs(eval_phi_momentum(state, p) -
                                       ft_oracle(state, p)));
    }
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("library quadrature transform matches the closed form too") {
  const HermiteState state{4, {0.1, 0.6, 1.4}};
  for (double p : {-1.0, 0.6, 2.3})
    CHECK(std::abs(eval_phi_momentum(state, p) -
                   eval_phi_momentum_quadrature(state, p)) < 1e-7);
}

TEST_CASE("normalization holds for n <= 20") {
  for (int n = 0; n <= 20; ++n) {
    const auto rule = gauss_hermite(std::max(64, n + 2));
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double h = hermite_orthonormal(n, rule.nodes[i]);
      acc += rule.weights[i] * h * h;
    }
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("moments: frozen contract values") {
  CHECK(moment({3, {0.0, 0.0, 0.5}}, MomentKind::kDispX) ==
        doctest::Approx(7.0).epsilon(1e-10));
  CHECK(moment({0, {1.5, 0.0, 1.0}}, MomentKind::kMeanX) ==
        doctest::Approx(1.5).epsilon(1e-10));
  CHECK(moment({2, {0.0, 0.0, 0.5}}, MomentKind::kDispP) ==
        doctest::Approx(1.25).epsilon(1e-10));
  CHECK(moment({0, {0.0, 0.0, 0.5}}, MomentKind::kDispP) ==
        doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("moment laws across random families") {
  const CounterRng rng(12345);
  for (std::uint64_t i = 0; i < 10; ++i) {
    const GaussianParams fam = random_family(rng, i);
    const double dx2 = fam.sigma_x() * fam.sigma_x();
    const double dp2 = fam.sigma_p * fam.sigma_p;
    for (int n = 0; n <= 10; ++n) {
      const HermiteState state{n, fam};
      CHECK(moment(state, MomentKind::kMeanX) ==
            doctest::Approx(fam.mean_x).epsilon(1e-8).scale(1.0));
      CHECK(moment(state, MomentKind::kMeanP) ==
            doctest::Approx(fam.mean_p).epsilon(1e-8).scale(1.0));
      CHECK(std::abs(moment(state, MomentKind::kDispX) - (2 * n + 1) * dx2) < 1e-8);
      CHECK(std::abs(moment(state, MomentKind::kDispP) - (2 * n + 1) * dp2) < 1e-8);
      CHECK(std::abs(moment(state, MomentKind::kDispX) *
                         moment(state, MomentKind::kDispP) -
                     (2 * n + 1) * (2 * n + 1) / 4.0) < 1e-8);
    }
  }
}

TEST_CASE("under-resolved quadrature is rejected") {
  CHECK_THROWS_AS(moment({6, {0, 0, 1}}, MomentKind::kDispX, QuadratureSpec{7}),
                  QuadratureUnderResolved);
  CHECK_NOTHROW(moment({6, {0, 0, 1}}, MomentKind::kDispX, QuadratureSpec{8}));
}

TEST_CASE("inner products: orthonormality and family gate") {
  const GaussianParams fam{0.2, -1.1, 0.8};
  CHECK(inner_product({2, fam}, {2, fam}).real() ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(inner_product({0, fam}, {1, fam})) < 1e-10);
  CHECK(std::abs(inner_product({5, fam}, {3, fam})) < 1e-10);
  GaussianParams other = fam;
  other.sigma_p = 0.9;
  CHECK_THROWS_AS(inner_product({0, fam}, {0, other}), FamilyMismatch);
}

TEST_CASE("parseval: position and momentum densities carry the same mass") {
  const GaussianParams fam{0.0, 0.7, 0.6};
  for (int n = 0; n <= 10; ++n) {
    const HermiteState state{n, fam};
    const double half = 14.0 * fam.sigma_p * std::sqrt(2.0);
    const int m = 8193;
    const double h = 2.0 * half / (m - 1);
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      const double p = fam.mean_p - half + i * h;
      double f = std::norm(eval_phi_momentum(state, p));
      if (i == 0 || i == m - 1) f *= 0.5;
      acc += f;
    }
    CHECK(acc * h == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("analytic derivatives agree with central differences") {
  const CounterRng rng(99);
  for (std::uint64_t i = 0; i < 6; ++i) {
    const GaussianParams fam = random_family(rng, i);
    for (int n : {0, 1, 4, 7}) {
      const HermiteState state{n, fam};
      for (auto convention :
           {PairConvention::kSchrodinger, PairConvention::kCovariant}) {
        const double x = fam.mean_x + fam.sigma_x() * rng.uniform(5, 10 * i + n, -2.0, 2.0);
        const double h = 1e-5 * std::max(1.0, fam.sigma_x());
        const auto c = eval_wave(state, x, convention);
        const auto lo = eval_wave(state, x - h, convention);
        const auto hi = eval_wave(state, x + h, convention);
        const Complex d1_fd = (hi.value - lo.value) / (2.0 * h);
        const Complex d2_fd = (hi.value - 2.0 * c.value + lo.value) / (h * h);
        const double scale = std::abs(c.value) + std::abs(c.d1) * h + 1e-12;
        CHECK(std::abs(c.d1 - d1_fd) / scale < 1e-4);
        CHECK(std::abs(c.d2 - d2_fd) / (scale / h) < 1e-2);
      }
    }
  }
}

TEST_CASE("covariant samples solve their oscillator equation pointwise") {
  // 1/2 [(i d/dx - P)^2 + 4 dp^4 (x-X)^2] phi_n = (2n+1) dp^2 phi_n.
  const GaussianParams fam{0.5, 1.2, 0.8};
  const double dp2 = fam.sigma_p * fam.sigma_p;
  for (int n : {0, 2, 5}) {
    const HermiteState state{n, fam};
    for (double offset : {-1.2, 0.1, 2.0}) {
      const double x = fam.mean_x + offset;
      const auto s = eval_wave(state, x, PairConvention::kCovariant);
      const Complex kinetic = -s.d2 - 2.0 * Complex{0, 1} * fam.mean_p * s.d1 +
                              fam.mean_p * fam.mean_p * s.value;
      const Complex lhs =
          0.5 * (kinetic + 4.0 * dp2 * dp2 * (x - fam.mean_x) * (x - fam.mean_x) *
                               s.value);
      CHECK(std::abs(lhs - (2.0 * n + 1.0) * dp2 * s.value) < 1e-12);
    }
  }
}
