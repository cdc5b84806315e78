#include "discofield/hermite.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace discofield {

namespace {

constexpr double kPi = std::numbers::pi;
const double kQuarticRootPi = std::pow(kPi, -0.25);

void require_n(int n) {
  if (n < 0) throw std::invalid_argument("hermite: n must be non-negative");
}

// Weight-normalized recurrence shared by the polynomial and function forms:
// p_{k+1} = u sqrt(2/(k+1)) p_k - sqrt(k/(k+1)) p_{k-1}.
// Seeded with pi^{-1/4} it yields H_n/sqrt(2^n n! sqrt(pi)); seeded with
// pi^{-1/4} e^{-u^2/2} it yields the Hermite functions h_n.
std::pair<double, double> normalized_walk(int n, double u, double seed) {
  double prev = 0.0;
  double cur = seed;
  for (int k = 0; k < n; ++k) {
    const double next =
        u * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return {prev, cur};  // (p_{n-1}, p_n)
}

}  // namespace

double hermite_polynomial(int n, double u) {
  require_n(n);
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 0; k < n; ++k) {
    const double next = 2.0 * u * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_orthonormal(int n, double u) {
  require_n(n);
  return normalized_walk(n, u, kQuarticRootPi).second;
}

double hermite_function(int n, double u) {
  require_n(n);
  return normalized_walk(n, u, kQuarticRootPi * std::exp(-0.5 * u * u)).second;
}

std::pair<double, double> hermite_function_pair(int n, double u) {
  require_n(n);
  return normalized_walk(n, u, kQuarticRootPi * std::exp(-0.5 * u * u));
}

namespace {

Complex phase(double arg) { return {std::cos(arg), std::sin(arg)}; }

double envelope_norm(double sigma) {
  // (2 sigma^2)^{-1/4}: converts the L^2(du) Hermite function to the
  // x-normalized wave function after u = (x - mean)/(sqrt2 sigma).
  return std::pow(2.0 * sigma * sigma, -0.25);
}

}  // namespace

Complex eval_phi(const HermiteState& state, double x) {
  state.validate();
  const double dx = state.params.sigma_x();
  const double u = (x - state.params.mean_x) / (std::sqrt(2.0) * dx);
  return hermite_function(state.n, u) * envelope_norm(dx) *
         phase(state.params.mean_p * x);
}

Complex eval_phi_momentum(const HermiteState& state, double p) {
  state.validate();
  const double dp = state.params.sigma_p;
  const double v = (p - state.params.mean_p) / (std::sqrt(2.0) * dp);
  // Eigenvalue (-i)^n of the Fourier transform on the Hermite family.
  static const Complex minus_i_pow[4] = {
      {1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
  return minus_i_pow[state.n % 4] * hermite_function(state.n, v) *
         envelope_norm(dp) * phase(-(p - state.params.mean_p) * state.params.mean_x);
}

Complex eval_phi_momentum_quadrature(const HermiteState& state, double p,
                                     const QuadratureSpec& quad) {
  state.validate();
  quad.validate();
  const double dx = state.params.sigma_x();
  const double half = quad.fallback_halfwidth * dx;
  const int m = quad.fallback_points;
  const double a = state.params.mean_x - half;
  const double h = 2.0 * half / (m - 1);
  Complex acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = a + i * h;
    Complex f = eval_phi(state, x) * phase(-p * x);
    if (i == 0 || i == m - 1) f *= 0.5;
    acc += f;
  }
  return acc * h / std::sqrt(2.0 * kPi);
}

WaveSample eval_wave(const HermiteState& state, double x,
                     PairConvention convention) {
  state.validate();
  const double dx = state.params.sigma_x();
  const double P = state.params.mean_p;
  const double inv = 1.0 / (std::sqrt(2.0) * dx);
  const double u = (x - state.params.mean_x) * inv;
  const auto [h_prev, h] = hermite_function_pair(state.n, u);
  // h'_n = sqrt(2n) h_{n-1} - u h_n ; h''_n = (u^2 - 2n - 1) h_n.
  const double hp = std::sqrt(2.0 * state.n) * h_prev - u * h;
  const double hpp = (u * u - 2.0 * state.n - 1.0) * h;

  const double s = (convention == PairConvention::kSchrodinger) ? 1.0 : -1.0;
  const Complex ph = envelope_norm(dx) * phase(s * P * x);
  const Complex ip{0.0, s * P};

  WaveSample out;
  out.value = h * ph;
  out.d1 = hp * inv * ph + ip * out.value;
  out.d2 = hpp * inv * inv * ph + 2.0 * ip * (hp * inv * ph) - P * P * out.value;
  return out;
}

GaussHermiteRule gauss_hermite(int order) {
  if (order < 1 || order > 300)
    throw std::invalid_argument("gauss_hermite: order must be in [1, 300]");
  GaussHermiteRule rule;
  rule.nodes.assign(order, 0.0);
  rule.weights.assign(order, 0.0);

  const int half = (order + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    // Stroud-Secrest style initial guesses, refined by Newton on the
    // weight-normalized recurrence.
    if (i == 0) {
      z = std::sqrt(2.0 * order + 1.0) -
          1.85575 * std::pow(2.0 * order + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(double(order), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    double pp = 0.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      double p1 = kQuarticRootPi;
      double p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 -
             std::sqrt(double(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * order) * p2;  // derivative of the normalized H_n
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-14) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw ConvergenceFailure("gauss_hermite: Newton iteration stalled");
    rule.nodes[i] = z;
    rule.nodes[order - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[order - 1 - i] = rule.weights[i];
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  // Ascending nodes.
  for (int i = 0; i < order / 2; ++i) {
    std::swap(rule.nodes[i], rule.nodes[order - 1 - i]);
    std::swap(rule.weights[i], rule.weights[order - 1 - i]);
  }
  return rule;
}

double moment(const HermiteState& state, MomentKind kind,
              const QuadratureSpec& quad) {
  state.validate();
  quad.validate();
  if (quad.gh_order < state.n + 2)
    throw QuadratureUnderResolved(
        "moment: Gauss-Hermite order must be >= n+2 for degree-(2n+2) exactness");

  const bool momentum_side =
      (kind == MomentKind::kMeanP || kind == MomentKind::kDispP);
  const double center =
      momentum_side ? state.params.mean_p : state.params.mean_x;
  const double sigma =
      momentum_side ? state.params.sigma_p : state.params.sigma_x();
  const bool dispersion =
      (kind == MomentKind::kDispX || kind == MomentKind::kDispP);

  // Change of variable u = (y - center)/(sqrt2 sigma) maps |phi_n|^2 dy to
  // Hbar_n(u)^2 e^{-u^2} du with Hbar the weight-normalized polynomial.
  const GaussHermiteRule rule = gauss_hermite(quad.gh_order);
  const double scale = std::sqrt(2.0) * sigma;
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = rule.nodes[i];
    const double hbar = hermite_orthonormal(state.n, u);
    const double f = dispersion ? (scale * u) * (scale * u) : center + scale * u;
    acc += rule.weights[i] * hbar * hbar * f;
  }
  return acc;
}

Complex inner_product(const HermiteState& a, const HermiteState& b,
                      const QuadratureSpec& quad) {
  a.validate();
  b.validate();
  quad.validate();
  if (!(a.params == b.params))
    throw FamilyMismatch("inner_product: states belong to different families");
  const int top = std::max(a.n, b.n);
  if (quad.gh_order < top + 2)
    throw QuadratureUnderResolved("inner_product: order must be >= max(n)+2");

  // Plane-wave phases cancel between the conjugate pair, leaving a pure
  // Gauss-Hermite integrand.
  const GaussHermiteRule rule = gauss_hermite(quad.gh_order);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = rule.nodes[i];
    acc += rule.weights[i] * hermite_orthonormal(a.n, u) *
           hermite_orthonormal(b.n, u);
  }
  return {acc, 0.0};
}

}  // namespace discofield
