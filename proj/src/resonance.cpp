#include "centrifugal/resonance.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "centrifugal/errors.hpp"
#include "centrifugal/flux.hpp"
#include "centrifugal/parallel.hpp"

namespace centrifugal {

namespace {

using cd = std::complex<double>;

constexpr int kPolishSteps = 3;
constexpr int kMaxHalvings = 30;

std::string format_lambda(cd lambda) {
  std::ostringstream os;
  os.precision(12);
  os << "(" << lambda.real() << ", " << lambda.imag() << ")";
  return os.str();
}

// Half-width of the state in units of eps0 from the barrier-penetration
// estimate, evaluated at a real level x.
double semiclassical_half_width(double x, double z0) {
  const double w = z0 - x;
  if (!(w > 0.0)) return 0.0;
  return 2.0 * std::sqrt(w) / z0 * std::exp(-4.0 / 3.0 * w * std::sqrt(w));
}

double bisect_bound_state(double lo, double hi, double g_lo, double z0) {
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = bound_state_function(mid, z0);
    if (g_mid == 0.0) return mid;
    if ((g_mid < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::complex<double> matching_residual(std::complex<double> lambda, double z0) {
  if (!(z0 > 0.0)) throw ValidationError("z0", "must be positive");
  return matching_terms<double>(lambda, z0).normalized();
}

double bound_state_function(double lambda, double z0) {
  const ScaledAiryQuad<double> inner = airy_eval_scaled(-lambda);
  const ScaledAiryQuad<double> outer = airy_eval_scaled(z0 - lambda);
  const double lhs = inner.ai_prime.real() * outer.bi.real();
  const double rhs = inner.ai.real() * outer.bi_prime.real();
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale > 0.0 ? (lhs - rhs) / scale : 0.0;
}

double hard_wall_semiclassical_level(int n) {
  return std::pow(0.75 * std::numbers::pi * (2.0 * n - 0.5), 2.0 / 3.0);
}

SemiclassicalEstimate semiclassical_lambda(int n, double z0, double eps0) {
  if (n < 1) throw ValidationError("n", "must be a positive integer");
  if (!(z0 > 0.0)) throw ValidationError("z0", "must be positive");
  SemiclassicalEstimate est;
  est.index_n = n;
  const double level = hard_wall_semiclassical_level(n);
  if (!(z0 > level)) return est;

  est.lambda_estimate = level - 1.0 / std::sqrt(z0 - level);
  est.valid = est.lambda_estimate < z0 && est.lambda_estimate > 0.0;
  if (est.valid) {
    const double w = z0 - est.lambda_estimate;
    est.gamma_estimate = 4.0 * eps0 * std::sqrt(w) / z0 * std::exp(-4.0 / 3.0 * w * std::sqrt(w));
  }
  return est;
}

std::complex<double> refine_lambda(std::complex<double> seed, double z0, int index_n,
                                   const SolverOptions& options) {
  cd lambda = seed;
  MatchingTerms<double> terms = matching_terms<double>(lambda, z0);
  double residual = std::abs(terms.normalized());
  double last_step = std::numeric_limits<double>::infinity();

  bool converged = false;
  for (int it = 0; it < options.max_iterations; ++it) {
    if (residual < options.residual_tolerance && last_step < options.step_tolerance) {
      converged = true;
      break;
    }
    if (terms.derivative == cd(0.0)) break;
    cd step = -terms.value / terms.derivative;

    cd trial = lambda + step;
    MatchingTerms<double> trial_terms = matching_terms<double>(trial, z0);
    double trial_residual = std::abs(trial_terms.normalized());
    for (int h = 0; h < kMaxHalvings && residual > 1e-12 &&
                    !(trial_residual <= residual);
         ++h) {
      step *= 0.5;
      trial = lambda + step;
      trial_terms = matching_terms<double>(trial, z0);
      trial_residual = std::abs(trial_terms.normalized());
    }
    lambda = trial;
    terms = trial_terms;
    residual = trial_residual;
    last_step = std::abs(step);
  }
  if (!converged && residual < options.residual_tolerance && last_step < options.step_tolerance) {
    converged = true;
  }
  if (!converged) {
    throw ConvergenceError("resonance n=" + std::to_string(index_n) + " did not converge after " +
                           std::to_string(options.max_iterations) +
                           " iterations; last iterate " + format_lambda(lambda));
  }

  // The imaginary part can be far below the resolution of the real part;
  // extra full steps settle it to working precision.
  for (int p = 0; p < kPolishSteps; ++p) {
    if (terms.derivative == cd(0.0)) break;
    const cd trial = lambda - terms.value / terms.derivative;
    const MatchingTerms<double> trial_terms = matching_terms<double>(trial, z0);
    if (!(std::abs(trial_terms.normalized()) < options.residual_tolerance)) break;
    lambda = trial;
    terms = trial_terms;
  }
  return lambda;
}

std::vector<std::complex<double>> solve_lambdas(double z0, int n_max,
                                                const SolverOptions& options) {
  if (!(z0 > 0.0) || !std::isfinite(z0)) throw ValidationError("z0", "must be a finite positive number");
  if (n_max < 1) throw ValidationError("n_max", "must be at least 1");
  if (!(options.scan_step > 0.0)) throw ValidationError("scan_step", "must be positive");

  std::vector<cd> roots;
  const double h = std::min(options.scan_step, z0 / 200.0);
  double x_prev = 0.5 * h;
  double g_prev = bound_state_function(x_prev, z0);

  for (double x = x_prev + h; x < z0 && static_cast<int>(roots.size()) < n_max; x += h) {
    const double g = bound_state_function(x, z0);
    if (g == 0.0 || (g < 0.0) != (g_prev < 0.0)) {
      const double seed_re = g == 0.0 ? x : bisect_bound_state(x_prev, x, g_prev, z0);
      const cd seed(seed_re, -semiclassical_half_width(seed_re, z0));
      const int index = static_cast<int>(roots.size()) + 1;
      const cd root = refine_lambda(seed, z0, index, options);
      if (root.real() > 0.0 && root.real() < z0) {
        for (const cd& other : roots) {
          if (std::abs(other - root) <= options.distinct_tolerance) {
            throw ConvergenceError("root collision: seeds for n=" + std::to_string(index) +
                                   " and an earlier state both converged to " +
                                   format_lambda(root));
          }
        }
        roots.push_back(root);
      }
    }
    x_prev = x;
    g_prev = g;
  }

  std::sort(roots.begin(), roots.end(),
            [](const cd& a, const cd& b) { return a.real() < b.real(); });
  return roots;
}

Resonance make_resonance(int index_n, std::complex<double> lambda, const ScaleSet& scales,
                         const PhysicalConstants& consts) {
  Resonance r;
  r.index_n = index_n;
  r.lambda = lambda;
  r.scales = scales;
  r.energy_eps = scales.eps0 * lambda;
  r.width_gamma = -2.0 * scales.eps0 * lambda.imag();
  r.lifetime_tau = r.width_gamma > 0.0 ? consts.hbar / r.width_gamma
                                       : std::numeric_limits<double>::infinity();
  const double M = consts.neutron_mass;
  const double R = scales.radius;
  r.ang_momentum_mu =
      scales.mu0 - r.energy_eps * (M * R * R / (scales.mu0 * consts.hbar * consts.hbar));
  return r;
}

std::vector<Resonance> solve_resonances(const ScaleSet& scales, int n_max,
                                        const SolverOptions& options,
                                        const PhysicalConstants& consts) {
  if (!(scales.eps0 > 0.0) || !(scales.radius > 0.0) || !(scales.mu0 > 0.0)) {
    throw ValidationError("scales", "scale set is not initialized");
  }
  const std::vector<cd> lambdas = solve_lambdas(scales.z0, n_max, options);
  std::vector<Resonance> out;
  out.reserve(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    out.push_back(make_resonance(static_cast<int>(i) + 1, lambdas[i], scales, consts));
  }
  return out;
}

double critical_velocity_semiclassical(int n, const MirrorSpec& mirror,
                                       const PhysicalConstants& consts) {
  if (n < 1) throw ValidationError("n", "must be a positive integer");
  mirror.validate();
  const double q = 1.5 * std::numbers::pi * (n - 0.75);
  const double U0 = mirror.fermi_potential_U0;
  const double R = mirror.radius_R;
  const double v4 = U0 * U0 * U0 / (q * q) * 2.0 * R * R /
                    (consts.hbar * consts.hbar * consts.neutron_mass);
  return std::sqrt(std::sqrt(v4));
}

std::vector<LifetimeRow> lifetime_curve(const MirrorSpec& mirror, const std::vector<double>& v_grid,
                                        int n_states, int threads,
                                        const PhysicalConstants& consts) {
  mirror.validate();
  if (n_states < 1) throw ValidationError("n_states", "must be at least 1");
  for (std::size_t i = 0; i < v_grid.size(); ++i) {
    if (!(v_grid[i] > 0.0)) throw ValidationError("v_grid", "velocities must be positive");
    if (i > 0 && !(v_grid[i] > v_grid[i - 1])) {
      throw ValidationError("v_grid", "velocities must be strictly ascending");
    }
  }

  const std::size_t per_v = static_cast<std::size_t>(n_states);
  std::vector<LifetimeRow> rows(v_grid.size() * per_v);
  parallel_for(v_grid.size(), threads, [&](std::size_t i) {
    const double v = v_grid[i];
    const double t_flight = time_of_flight(mirror, v);
    for (std::size_t k = 0; k < per_v; ++k) {
      LifetimeRow& row = rows[i * per_v + k];
      row.velocity = v;
      row.index_n = static_cast<int>(k) + 1;
      row.time_of_flight = t_flight;
    }
    try {
      const ScaleSet s = make_scales(BeamSpec{v}, mirror, consts);
      const std::vector<Resonance> states = solve_resonances(s, n_states, {}, consts);
      for (const Resonance& r : states) rows[i * per_v + r.index_n - 1].lifetime_tau = r.lifetime_tau;
    } catch (const std::exception& e) {
      for (std::size_t k = 0; k < per_v; ++k) rows[i * per_v + k].error = e.what();
    }
  });
  return rows;
}

std::optional<double> lifetime_crossing(const MirrorSpec& mirror, int n, double v_lo, double v_hi,
                                        double tolerance, const PhysicalConstants& consts) {
  mirror.validate();
  if (n < 1) throw ValidationError("n", "must be a positive integer");
  if (!(v_lo > 0.0) || !(v_hi > v_lo)) throw ValidationError("v_range", "need 0 < v_lo < v_hi");

  // Positive while the state outlives the passage; an absent state counts as
  // already decayed.
  auto excess = [&](double v) {
    const ScaleSet s = make_scales(BeamSpec{v}, mirror, consts);
    const std::vector<Resonance> states = solve_resonances(s, n, {}, consts);
    const double t_flight = time_of_flight(mirror, v);
    if (static_cast<int>(states.size()) < n) return -1.0;
    return std::log(states[n - 1].lifetime_tau / t_flight);
  };

  double f_lo = excess(v_lo);
  const double f_hi = excess(v_hi);
  if ((f_lo > 0.0) == (f_hi > 0.0)) return std::nullopt;
  while (v_hi - v_lo > tolerance) {
    const double mid = 0.5 * (v_lo + v_hi);
    const double f_mid = excess(mid);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      v_lo = mid;
      f_lo = f_mid;
    } else {
      v_hi = mid;
    }
  }
  return 0.5 * (v_lo + v_hi);
}

}  // namespace centrifugal
