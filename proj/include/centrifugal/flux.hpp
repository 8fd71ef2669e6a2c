#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "centrifugal/resonance.hpp"
#include "centrifugal/scales.hpp"

namespace centrifugal {

/// How the initial population |C_n|^2 of each state is chosen.
struct PopulationModel {
  enum class Mode { equal, overlap };

  Mode mode = Mode::equal;
  double band_height_h = 0.0;  // m, overlap mode only

  void validate() const;
};

/// Flight time along the mirror arc, L / v.
double time_of_flight(const MirrorSpec& mirror, double v);

/// Equal mode: weight 1 per state. Overlap mode: |int_0^h chi_n|^2 for the
/// regular interior solution normalized between the mirror and the turning
/// point, then rescaled to sum 1.
std::vector<double> initial_populations(const std::vector<Resonance>& resonances,
                                        const PopulationModel& model);

/// Additional decay width (J) of a state at velocity v; used by the roughness
/// model. Returns 0 for the smooth mirror.
using ExtraWidth = std::function<double(const Resonance&, double v)>;

struct FluxOptions {
  int n_max = 32;
  int threads = 1;
};

struct FluxPoint {
  double velocity = 0.0;
  double flux = 0.0;                // (v/R) sum_n w_n exp(-Gamma_n t / hbar), 1/s
  int state_count = 0;
  std::vector<double> contribution;  // per state, per unit weight, 1/s
  std::vector<double> weight;
};

FluxPoint deflected_flux(const MirrorSpec& mirror, double v, const PopulationModel& model,
                         const FluxOptions& options = {}, const ExtraWidth& extra = {},
                         const PhysicalConstants& consts = PhysicalConstants::codata());

struct SweepParams {
  double v_min = 0.0;
  double v_max = 0.0;
  int steps = 0;
  double reference_velocity = 0.0;

  void validate() const;
};

struct FluxCurve {
  Eigen::ArrayXd velocity_grid;
  Eigen::ArrayXd relative_flux;   // F / F(reference_velocity); NaN at failed points
  Eigen::ArrayXd absolute_flux;   // 1/s
  Eigen::ArrayXi state_count;
  double reference_velocity = 0.0;
  double reference_flux = 0.0;
  std::map<int, Eigen::ArrayXd> per_state;  // contribution per unit weight, 1/s
  std::vector<std::string> point_error;     // empty string where the point succeeded

  Eigen::Index size() const { return velocity_grid.size(); }
  int failed_points() const;
};

/// Uniform grid from v_min to v_max with `steps` points, plus the reference
/// velocity if it is not already a grid node.
std::vector<double> sweep_grid(const SweepParams& params);

FluxCurve flux_sweep(const MirrorSpec& mirror, const SweepParams& params,
                     const PopulationModel& model, const FluxOptions& options = {},
                     const PhysicalConstants& consts = PhysicalConstants::codata());

/// Shared implementation for the smooth and rough sweeps.
FluxCurve flux_sweep_with_width(const MirrorSpec& mirror, const SweepParams& params,
                                const PopulationModel& model, const ExtraWidth& extra,
                                const FluxOptions& options,
                                const PhysicalConstants& consts = PhysicalConstants::codata());

/// d(log F)/dv by central differences (one-sided at the ends).
Eigen::ArrayXd log_flux_slope(const FluxCurve& curve);

/// Velocities of the `count` largest local maxima of |d(log F)/dv|, ordered
/// by decreasing slope magnitude.
std::vector<double> detect_steps(const FluxCurve& curve, int count);

/// Relative drop of a curve across [v_step - half_window, v_step + half_window]:
/// (F(lo) - F(hi)) / reference, where `reference` is F(lo) of `baseline`.
double step_contrast(const FluxCurve& curve, const FluxCurve& baseline, double v_step,
                     double half_window);

}  // namespace centrifugal
