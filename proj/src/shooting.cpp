#include "centrifugal/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Core>

#include "centrifugal/errors.hpp"
#include "centrifugal/resonance.hpp"

namespace centrifugal {

namespace {

using cd = std::complex<double>;
using State = Eigen::Vector2cd;  // (chi, chi')

constexpr double kExteriorReach = 40.0;
constexpr double kInteriorDecay = 8.0;

State interior_rhs(double zeta, cd lambda, const State& y) {
  // Left of the mirror the potential is -zeta.
  return State(y[1], (-zeta - lambda) * y[0]);
}

cd riccati_rhs(double zeta, cd lambda, double z0, cd phi) { return (z0 - zeta - lambda) - phi * phi; }

struct Branches {
  State interior;
  cd phi;
};

Branches integrate_branches(cd lambda, double z0, const ShootingGrid& grid) {
  // Interior: decaying WKB start, RK4 toward the wall with renormalization.
  const int n_in = std::max(1, static_cast<int>(std::ceil(-grid.z_min / grid.step)));
  const double h_in = -grid.z_min / n_in;
  const cd kappa0 = std::sqrt(cd(-grid.z_min) - lambda);
  State y(1.0, kappa0);
  for (int i = 0; i < n_in; ++i) {
    const double z = grid.z_min + i * h_in;
    const State k1 = interior_rhs(z, lambda, y);
    const State k2 = interior_rhs(z + 0.5 * h_in, lambda, y + 0.5 * h_in * k1);
    const State k3 = interior_rhs(z + 0.5 * h_in, lambda, y + 0.5 * h_in * k2);
    const State k4 = interior_rhs(z + h_in, lambda, y + h_in * k3);
    y += h_in / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double mag = y.cwiseAbs().maxCoeff();
    if (mag > 1e100 || mag < 1e-100) y /= mag;
  }

  // Exterior: outgoing wave k^{-1/2} exp(i int k) gives phi = i k - k'/(2k),
  // k^2 = zeta + lambda - z0.
  const int n_out = std::max(1, static_cast<int>(std::ceil(grid.z_max / grid.step)));
  const double h_out = -grid.z_max / n_out;
  const cd k = std::sqrt(cd(grid.z_max) + lambda - z0);
  cd phi = cd(0, 1) * k - 1.0 / (4.0 * k * k);
  for (int i = 0; i < n_out; ++i) {
    const double z = grid.z_max + i * h_out;
    const cd k1 = riccati_rhs(z, lambda, z0, phi);
    const cd k2 = riccati_rhs(z + 0.5 * h_out, lambda, z0, phi + 0.5 * h_out * k1);
    const cd k3 = riccati_rhs(z + 0.5 * h_out, lambda, z0, phi + 0.5 * h_out * k2);
    const cd k4 = riccati_rhs(z + h_out, lambda, z0, phi + h_out * k3);
    phi += h_out / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return {y, phi};
}

ShootingResult shoot_unchecked(cd lambda, double z0, const ShootingGrid& grid) {
  const Branches b = integrate_branches(lambda, z0, grid);
  ShootingResult r;
  r.interior_value = b.interior[0];
  r.interior_slope = b.interior[1];
  r.exterior_log_slope = b.phi;
  const cd lhs = b.interior[1];
  const cd rhs = b.phi * b.interior[0];
  r.scale = std::abs(lhs) + std::abs(rhs);
  r.mismatch = r.scale > 0.0 ? (lhs - rhs) / r.scale : cd(0.0);
  return r;
}

// Wronskian over chi_in'(0): analytic in lambda and free of the interior
// renormalization factor.
cd analytic_mismatch(cd lambda, double z0, const ShootingGrid& grid) {
  const ShootingResult r = shoot_unchecked(lambda, z0, grid);
  return 1.0 - r.exterior_log_slope * r.interior_value / r.interior_slope;
}

double half_width_estimate(double x, double z0) {
  const double w = z0 - x;
  if (!(w > 0.0)) return 0.0;
  return 2.0 * std::sqrt(w) / z0 * std::exp(-4.0 / 3.0 * w * std::sqrt(w));
}

std::string describe(cd lambda) {
  std::ostringstream os;
  os.precision(12);
  os << "(" << lambda.real() << ", " << lambda.imag() << ")";
  return os.str();
}

}  // namespace

ShootingGrid ShootingGrid::for_problem(double z0, double lambda_max, double step) {
  if (!(z0 > 0.0)) throw ValidationError("z0", "must be positive");
  const double lm = std::max(lambda_max, 0.0);
  ShootingGrid g;
  g.z_min = -(lm + std::max(3.0 * std::sqrt(lm), kInteriorDecay));
  g.z_max = z0 + kExteriorReach;
  g.step = step;
  return g;
}

void ShootingGrid::validate(double z0, double lambda_real) const {
  if (!(step > 0.0) || step > kMaxStep) {
    throw ValidationError("step", "must be positive and at most 1e-3");
  }
  const double lm = std::max(lambda_real, 0.0);
  if (!(z_min <= -(lm + 3.0 * std::sqrt(lm)))) {
    throw ValidationError("z_min", "must lie 3 sqrt(lambda) below the turning point");
  }
  if (!(z_max >= z0 + 5.0)) throw ValidationError("z_max", "must be at least z0 + 5");
}

ShootingResult shoot(std::complex<double> lambda, double z0, const ShootingGrid& grid) {
  if (!(z0 > 0.0)) throw ValidationError("z0", "must be positive");
  grid.validate(z0, lambda.real());
  return shoot_unchecked(lambda, z0, grid);
}

std::complex<double> shoot_mismatch(std::complex<double> lambda, double z0,
                                    const ShootingGrid& grid) {
  return shoot(lambda, z0, grid).mismatch;
}

std::vector<OracleRoot> oracle_resonances(double z0, int n_max, const ShootingGrid& grid,
                                          const OracleOptions& options) {
  if (!(z0 > 0.0)) throw ValidationError("z0", "must be positive");
  if (n_max < 1) throw ValidationError("n_max", "must be at least 1");
  grid.validate(z0, z0);

  // Coarse real-axis scan; only the sign of the real mismatch is used.
  ShootingGrid coarse = grid;
  coarse.step = options.scan_grid_step;
  auto real_mismatch = [&](double x) { return shoot_unchecked(cd(x), z0, coarse).mismatch.real(); };

  std::vector<OracleRoot> roots;
  const double h = std::min(options.scan_step, z0 / 100.0);
  double x_prev = 0.5 * h;
  double f_prev = real_mismatch(x_prev);
  for (double x = x_prev + h; x < z0 && static_cast<int>(roots.size()) < n_max; x += h) {
    const double f = real_mismatch(x);
    if ((f < 0.0) != (f_prev < 0.0) || f == 0.0) {
      double lo = x_prev;
      double hi = x;
      double f_lo = f_prev;
      for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = real_mismatch(mid);
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      const double seed_re = 0.5 * (lo + hi);

      OracleRoot root;
      root.index_n = static_cast<int>(roots.size()) + 1;
      cd a(seed_re, -half_width_estimate(seed_re, z0));
      cd b = a + cd(1e-6, -1e-6);
      cd fa = analytic_mismatch(a, z0, grid);
      cd fb = analytic_mismatch(b, z0, grid);
      for (int it = 0; it < options.max_iterations; ++it) {
        if (fb == fa) {
          root.converged = std::abs(fb) < 1e-12;
          break;
        }
        const cd next = b - fb * (b - a) / (fb - fa);
        a = b;
        fa = fb;
        b = next;
        fb = analytic_mismatch(b, z0, grid);
        if (std::abs(b - a) < options.tolerance * std::max(1.0, std::abs(b))) {
          root.converged = true;
          break;
        }
      }
      if (root.converged) {
        // Chord steps with a fixed finite-difference slope settle the
        // imaginary part, which can sit far below the real-part resolution.
        for (int c = 0; c < options.chord_steps; ++c) {
          const cd f0 = analytic_mismatch(b, z0, grid);
          const cd slope = (analytic_mismatch(b + options.chord_delta, z0, grid) - f0) /
                           options.chord_delta;
          if (slope == cd(0.0)) break;
          b -= f0 / slope;
        }
        root.lambda = b;
        if (!(b.real() > 0.0 && b.real() < z0)) {
          x_prev = x;
          f_prev = f;
          continue;
        }
      } else {
        root.lambda = b;
        root.error = "no convergence for n=" + std::to_string(root.index_n) + ", last iterate " +
                     describe(b);
      }
      roots.push_back(root);
    }
    x_prev = x;
    f_prev = f;
  }
  return roots;
}

std::vector<OracleRoot> oracle_resonances(double z0, int n_max) {
  return oracle_resonances(z0, n_max, ShootingGrid::for_problem(z0, z0));
}

OracleCheck compare_with_oracle(double z0, int compared, double real_tol, double imag_tol) {
  constexpr int kAll = 256;
  OracleCheck check;
  check.z0 = z0;
  check.solver = solve_lambdas(z0, kAll);
  bool oracle_ok = true;
  for (const OracleRoot& r : oracle_resonances(z0, kAll)) {
    if (!r.converged) oracle_ok = false;
    check.oracle.push_back(r.lambda);
  }
  check.solver_count = static_cast<int>(check.solver.size());
  check.oracle_count = static_cast<int>(check.oracle.size());

  const int n = std::min({compared, check.solver_count, check.oracle_count});
  for (int i = 0; i < n; ++i) {
    const auto a = check.solver[i];
    const auto b = check.oracle[i];
    check.worst_real_rel = std::max(check.worst_real_rel, std::abs(a.real() - b.real()) / std::abs(b.real()));
    check.worst_imag_rel = std::max(check.worst_imag_rel, std::abs(a.imag() - b.imag()) / std::abs(b.imag()));
  }
  check.passed = oracle_ok && n == compared && check.solver_count == check.oracle_count &&
                 check.worst_real_rel <= real_tol && check.worst_imag_rel <= imag_tol;
  return check;
}

}  // namespace centrifugal
