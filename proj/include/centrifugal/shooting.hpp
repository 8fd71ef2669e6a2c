#pragma once

#include <complex>
#include <string>
#include <vector>

namespace centrifugal {

/// Discretization of chi'' = (z0 Theta(zeta) - zeta - lambda) chi on
/// [z_min, z_max], in units of l0 and eps0.
struct ShootingGrid {
  double z_min = 0.0;  // interior cut, below the deepest turning point
  double z_max = 0.0;  // exterior cut, beyond the barrier
  double step = 1e-3;

  static constexpr double kMaxStep = 1e-3;

  /// Cuts placed 8 decay lengths (at least 3 sqrt(lambda)) below the turning
  /// point of lambda_max and 40 units past the barrier top.
  static ShootingGrid for_problem(double z0, double lambda_max, double step = kMaxStep);

  /// Throws ValidationError unless the grid is usable for (lambda, z0).
  void validate(double z0, double lambda_real) const;
};

struct ShootingResult {
  std::complex<double> mismatch;  // normalized by `scale`
  std::complex<double> interior_value;
  std::complex<double> interior_slope;
  std::complex<double> exterior_log_slope;
  double scale = 0.0;
};

/// Integrates both branches to the mirror surface and returns their
/// Wronskian chi_in' - phi_out chi_in relative to |chi_in'| + |phi_out chi_in|.
/// The interior branch starts decaying at z_min; the exterior one is an
/// outgoing WKB wave at z_max carried inward as the log-derivative phi.
ShootingResult shoot(std::complex<double> lambda, double z0, const ShootingGrid& grid);

std::complex<double> shoot_mismatch(std::complex<double> lambda, double z0,
                                    const ShootingGrid& grid);

struct OracleRoot {
  int index_n = 0;
  std::complex<double> lambda;
  bool converged = false;
  std::string error;
};

struct OracleOptions {
  double scan_step = 0.05;
  double scan_grid_step = 5e-3;
  int max_iterations = 60;
  double tolerance = 1e-11;
  int chord_steps = 3;
  double chord_delta = 1e-6;
};

/// Complex eigenvalues with 0 < Re(lambda) < z0, at most n_max of them, by
/// secant iteration on the shooting mismatch. Seeds come from sign changes
/// of the real mismatch along the real axis, each with the barrier
/// penetration estimate as imaginary part.
std::vector<OracleRoot> oracle_resonances(double z0, int n_max, const ShootingGrid& grid,
                                          const OracleOptions& options = {});

/// Convenience overload with ShootingGrid::for_problem(z0, z0).
std::vector<OracleRoot> oracle_resonances(double z0, int n_max);

/// Airy solver against the shooting oracle at one z0, on the first
/// `compared` states and on the total state count.
struct OracleCheck {
  double z0 = 0.0;
  int solver_count = 0;
  int oracle_count = 0;
  std::vector<std::complex<double>> solver;
  std::vector<std::complex<double>> oracle;
  double worst_real_rel = 0.0;
  double worst_imag_rel = 0.0;
  bool passed = false;
};

OracleCheck compare_with_oracle(double z0, int compared = 2, double real_tol = 1e-4,
                                double imag_tol = 1e-2);

}  // namespace centrifugal
