#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "centrifugal/airy.hpp"
#include "centrifugal/scales.hpp"

namespace centrifugal {

/// One quasi-stationary state of the linearized radial problem.
struct Resonance {
  int index_n = 0;
  std::complex<double> lambda;      // dimensionless eigenvalue
  std::complex<double> energy_eps;  // eps0 * lambda, J
  double width_gamma = 0.0;         // -2 eps0 Im(lambda), J
  double lifetime_tau = 0.0;        // hbar / width, s (infinite when the width underflows)
  std::complex<double> ang_momentum_mu;
  ScaleSet scales{};
};

struct SemiclassicalEstimate {
  int index_n = 0;
  double lambda_estimate = 0.0;
  double gamma_estimate = 0.0;  // J
  bool valid = false;
};

/// Value and lambda-derivative of the matching condition
///   Ai'(-l) (Bi(w) + i Ai(w)) - Ai(-l) (Bi'(w) + i Ai'(w)),  w = z0 - l,
/// all multiplied by the same positive factor so that nothing overflows.
/// `scale` is the larger modulus of the two products under that factor.
template <typename Real>
struct MatchingTerms {
  std::complex<Real> value;
  std::complex<Real> derivative;
  Real scale;

  std::complex<Real> normalized() const { return scale > 0 ? value / scale : value; }
};

template <typename Real>
MatchingTerms<Real> matching_terms(std::complex<Real> lambda, Real z0) {
  using C = std::complex<Real>;
  const ScaledAiryQuad<Real> inner = airy_eval_scaled(C(-lambda));
  const ScaledAiryQuad<Real> outer = airy_eval_scaled(C(z0 - lambda));

  // Outgoing combination in units of exp(bi_exponent).
  const Real ai_weight = std::exp(outer.ai_exponent - outer.bi_exponent);
  const C i(0, 1);
  const C out = outer.bi + i * outer.ai * ai_weight;
  const C out_prime = outer.bi_prime + i * outer.ai_prime * ai_weight;

  const C lhs = inner.ai_prime * out;
  const C rhs = inner.ai * out_prime;
  // d/dl of the residual reduces to z0 Ai(-l) B(w) through y'' = x y.
  return {lhs - rhs, z0 * inner.ai * out, std::max(std::abs(lhs), std::abs(rhs))};
}

/// Matching-condition residual normalized by the larger of its two products.
template <typename Real>
std::complex<Real> matching_residual(std::complex<Real> lambda, Real z0) {
  return matching_terms(lambda, z0).normalized();
}

std::complex<double> matching_residual(std::complex<double> lambda, double z0);

/// Real part of the residual with the Ai-admixture of the outgoing wave
/// dropped; its sign changes on the real axis bracket the states.
double bound_state_function(double lambda, double z0);

/// Leading WKB level of the hard-wall problem, (3/4 pi (2n - 1/2))^{2/3}.
double hard_wall_semiclassical_level(int n);

SemiclassicalEstimate semiclassical_lambda(int n, double z0, double eps0 = 1.0);

struct SolverOptions {
  int max_iterations = 100;
  double residual_tolerance = 1e-9;
  double step_tolerance = 1e-10;
  double distinct_tolerance = 1e-6;
  double scan_step = 0.01;
};

/// Complex eigenvalues with 0 < Re(lambda) < z0, at most n_max of them,
/// ordered by real part.
std::vector<std::complex<double>> solve_lambdas(double z0, int n_max,
                                                const SolverOptions& options = {});

/// Damped Newton iteration on the matching condition from one seed.
std::complex<double> refine_lambda(std::complex<double> seed, double z0, int index_n,
                                   const SolverOptions& options = {});

Resonance make_resonance(int index_n, std::complex<double> lambda, const ScaleSet& scales,
                         const PhysicalConstants& consts = PhysicalConstants::codata());

std::vector<Resonance> solve_resonances(const ScaleSet& scales, int n_max,
                                        const SolverOptions& options = {},
                                        const PhysicalConstants& consts =
                                            PhysicalConstants::codata());

/// Velocity at which the n-th state reaches the top of the barrier,
/// z0 = (3/2 pi (n - 3/4))^{2/3}.
double critical_velocity_semiclassical(int n, const MirrorSpec& mirror,
                                       const PhysicalConstants& consts =
                                           PhysicalConstants::codata());

struct LifetimeRow {
  double velocity = 0.0;
  int index_n = 0;
  std::optional<double> lifetime_tau;  // empty when the state does not exist
  double time_of_flight = 0.0;
  std::string error;  // solver failure at this velocity, if any

  bool exists() const { return lifetime_tau.has_value(); }
};

/// Rows ordered by (velocity, n) for n = 1..n_states at every grid velocity.
std::vector<LifetimeRow> lifetime_curve(const MirrorSpec& mirror, const std::vector<double>& v_grid,
                                        int n_states, int threads = 1,
                                        const PhysicalConstants& consts =
                                            PhysicalConstants::codata());

/// Velocity in [v_lo, v_hi] at which the lifetime of state n equals the
/// flight time along the mirror, found by bisection. Empty if there is no
/// sign change on the interval.
std::optional<double> lifetime_crossing(const MirrorSpec& mirror, int n, double v_lo, double v_hi,
                                        double tolerance = 0.1,
                                        const PhysicalConstants& consts =
                                            PhysicalConstants::codata());

}  // namespace centrifugal
