#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "discofield/gaussian.hpp"

namespace discofield {

/// Physicists' Hermite polynomial H_n(u) by the three-term recurrence
/// H_0 = 1, H_1 = 2u, H_{n+1} = 2u H_n - 2n H_{n-1}.
/// Raw values overflow around n ~ 150; use hermite_orthonormal for large n.
double hermite_polynomial(int n, double u);

/// H_n(u) / sqrt(2^n n! sqrt(pi)) via the weight-normalized recurrence.
/// Orthonormal against the weight e^{-u^2}; stable for any practical n.
double hermite_orthonormal(int n, double u);

/// Hermite function h_n(u) = hermite_orthonormal(n, u) * e^{-u^2/2},
/// orthonormal in L^2(du). The Gaussian is carried inside the recurrence, so
/// there is no factorial evaluation and no overflow at any n (the documented
/// cap of the naive-factorial route would be n ~ 150; this path has none).
double hermite_function(int n, double u);

/// (h_{n-1}(u), h_n(u)) in one recurrence walk; h_{-1} := 0.
std::pair<double, double> hermite_function_pair(int n, double u);

/// Harmonic Gaussian wave function in the coordinate representation,
///   phi_n(x) = h_n((x-X)/(sqrt2 dx)) / (2 dx^2)^{1/4} * e^{iPx},
/// with dx = 1/(2 dp). Normalized: integral |phi_n|^2 dx = 1.
Complex eval_phi(const HermiteState& state, double x);

/// Closed-form Fourier transform (1/sqrt(2pi)) integral phi_n(x) e^{-ipx} dx:
/// a harmonic Gaussian in p centered at P with ground spread dp,
///   (-i)^n h_n((p-P)/(sqrt2 dp)) / (2 dp^2)^{1/4} * e^{-i(p-P)X}.
Complex eval_phi_momentum(const HermiteState& state, double p);

/// Same integral by direct uniform-grid quadrature of eval_phi; the slow
/// independent route the closed form is checked against.
Complex eval_phi_momentum_quadrature(const HermiteState& state, double p,
                                     const QuadratureSpec& quad = {});

/// Wave function value together with its first two x-derivatives, under the
/// requested pair convention (phase e^{+iPx} or e^{-iPx}).
struct WaveSample {
  Complex value;
  Complex d1;
  Complex d2;
};
WaveSample eval_wave(const HermiteState& state, double x,
                     PairConvention convention);

/// Gauss-Hermite rule: sum_i w_i f(u_i) ~ integral f(u) e^{-u^2} du.
/// Orders up to 300 are supported (node values keep intermediate
/// polynomial magnitudes representable).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermiteRule gauss_hermite(int order);

enum class MomentKind { kMeanX, kMeanP, kDispX, kDispP };

/// Moment of |phi_n|^2 (or |phi~_n|^2) by Gauss-Hermite quadrature.
/// Contracts: mean_x -> X, mean_p -> P, disp_x -> (2n+1) dx^2,
/// disp_p -> (2n+1) dp^2. Requires gh_order >= n+2 (exactness for the
/// degree-(2n+2) integrand), else QuadratureUnderResolved.
double moment(const HermiteState& state, MomentKind kind,
              const QuadratureSpec& quad = {});

/// <a|b> within one family; FamilyMismatch if the params differ.
Complex inner_product(const HermiteState& a, const HermiteState& b,
                      const QuadratureSpec& quad = {});

}  // namespace discofield
