#include "centrifugal/flux.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "centrifugal/airy.hpp"
#include "centrifugal/errors.hpp"
#include "centrifugal/parallel.hpp"

namespace centrifugal {

namespace {

using cd = std::complex<double>;

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 4> kGaussNodes = {0.1834346424956498, 0.5255324099163290,
                                               0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGaussWeights = {0.3626837833783620, 0.3137066458778873,
                                                 0.2223810344533745, 0.1012285362903763};
constexpr double kPanelWidth = 0.125;

template <typename F>
auto integrate(F&& f, double a, double b) {
  using T = decltype(f(a));
  T total{};
  if (!(b > a)) return total;
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / kPanelWidth)));
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    const double half = 0.5 * width;
    for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
      total += half * kGaussWeights[k] * (f(mid - half * kGaussNodes[k]) + f(mid + half * kGaussNodes[k]));
    }
  }
  return total;
}

// Regular interior solution at distance s (units of l0) from the mirror.
cd interior_wave(double s, cd lambda) { return airy_eval(cd(s) - lambda).ai; }

}  // namespace

void PopulationModel::validate() const {
  if (mode == Mode::overlap && !(band_height_h > 0.0 && std::isfinite(band_height_h))) {
    throw ValidationError("band_height_h", "must be positive in overlap mode");
  }
}

double time_of_flight(const MirrorSpec& mirror, double v) {
  if (!(v > 0.0)) throw ValidationError("velocity_v", "must be positive");
  return mirror.length_L / v;
}

std::vector<double> initial_populations(const std::vector<Resonance>& resonances,
                                        const PopulationModel& model) {
  if (resonances.empty()) throw ValidationError("resonances", "list is empty");
  model.validate();
  std::vector<double> w(resonances.size(), 1.0);
  if (model.mode == PopulationModel::Mode::equal) return w;

  double total = 0.0;
  for (std::size_t i = 0; i < resonances.size(); ++i) {
    const Resonance& r = resonances[i];
    const double h = model.band_height_h / r.scales.l0;
    const double turning = r.lambda.real();
    const cd overlap = integrate([&](double s) { return interior_wave(s, r.lambda); }, 0.0, h);
    const double norm =
        integrate([&](double s) { return std::norm(interior_wave(s, r.lambda)); }, 0.0, turning);
    w[i] = std::norm(overlap) / norm;
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

FluxPoint deflected_flux(const MirrorSpec& mirror, double v, const PopulationModel& model,
                         const FluxOptions& options, const ExtraWidth& extra,
                         const PhysicalConstants& consts) {
  model.validate();
  FluxPoint p;
  p.velocity = v;
  const ScaleSet s = make_scales(BeamSpec{v}, mirror, consts);
  std::vector<Resonance> states;
  try {
    states = solve_resonances(s, options.n_max, {}, consts);
  } catch (const std::exception& e) {
    std::ostringstream os;
    os.precision(12);
    os << "v=" << v << " m/s: " << e.what();
    throw ConvergenceError(os.str());
  }
  p.state_count = static_cast<int>(states.size());
  if (states.empty()) return p;

  p.weight = initial_populations(states, model);
  const double t = time_of_flight(mirror, v);
  const double rate = v / mirror.radius_R;
  p.contribution.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    double gamma = states[i].width_gamma;
    if (extra) gamma += extra(states[i], v);
    p.contribution[i] = rate * std::exp(-gamma * t / consts.hbar);
    p.flux += p.weight[i] * p.contribution[i];
  }
  return p;
}

void SweepParams::validate() const {
  if (!(v_min > 0.0)) throw ValidationError("v_min", "must be positive");
  if (!(v_max > v_min)) throw ValidationError("v_max", "must exceed v_min");
  if (steps < 2) throw ValidationError("steps", "must be at least 2");
  if (!(reference_velocity >= v_min && reference_velocity <= v_max)) {
    throw ValidationError("reference_velocity", "must lie within [v_min, v_max]");
  }
}

int FluxCurve::failed_points() const {
  return static_cast<int>(std::count_if(point_error.begin(), point_error.end(),
                                        [](const std::string& e) { return !e.empty(); }));
}

std::vector<double> sweep_grid(const SweepParams& params) {
  params.validate();
  std::vector<double> grid(static_cast<std::size_t>(params.steps));
  const double dv = (params.v_max - params.v_min) / (params.steps - 1);
  for (int i = 0; i < params.steps; ++i) grid[i] = params.v_min + i * dv;
  grid.back() = params.v_max;

  const double v_ref = params.reference_velocity;
  const bool on_grid = std::any_of(grid.begin(), grid.end(), [&](double v) {
    return std::abs(v - v_ref) <= 1e-9 * v_ref;
  });
  if (!on_grid) grid.insert(std::upper_bound(grid.begin(), grid.end(), v_ref), v_ref);
  return grid;
}

FluxCurve flux_sweep(const MirrorSpec& mirror, const SweepParams& params,
                     const PopulationModel& model, const FluxOptions& options,
                     const PhysicalConstants& consts) {
  return flux_sweep_with_width(mirror, params, model, {}, options, consts);
}

FluxCurve flux_sweep_with_width(const MirrorSpec& mirror, const SweepParams& params,
                                const PopulationModel& model, const ExtraWidth& extra,
                                const FluxOptions& options, const PhysicalConstants& consts) {
  mirror.validate();
  model.validate();
  const std::vector<double> grid = sweep_grid(params);
  const std::size_t n = grid.size();

  std::vector<FluxPoint> points(n);
  std::vector<std::string> errors(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    try {
      points[i] = deflected_flux(mirror, grid[i], model, options, extra, consts);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  FluxCurve curve;
  curve.reference_velocity = params.reference_velocity;
  curve.velocity_grid = Eigen::Map<const Eigen::ArrayXd>(grid.data(), static_cast<Eigen::Index>(n));
  curve.absolute_flux.resize(static_cast<Eigen::Index>(n));
  curve.state_count.resize(static_cast<Eigen::Index>(n));
  curve.point_error = errors;

  int max_states = 0;
  for (const FluxPoint& p : points) max_states = std::max(max_states, p.state_count);
  for (int k = 1; k <= max_states; ++k) {
    curve.per_state[k] = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(n));
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::ptrdiff_t ref_index = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    if (std::abs(grid[i] - params.reference_velocity) <= 1e-9 * params.reference_velocity) {
      ref_index = static_cast<std::ptrdiff_t>(i);
    }
    if (!errors[i].empty()) {
      curve.absolute_flux[idx] = nan;
      curve.state_count[idx] = -1;
      for (auto& [k, arr] : curve.per_state) arr[idx] = nan;
      continue;
    }
    curve.absolute_flux[idx] = points[i].flux;
    curve.state_count[idx] = points[i].state_count;
    for (std::size_t k = 0; k < points[i].contribution.size(); ++k) {
      curve.per_state[static_cast<int>(k) + 1][idx] = points[i].contribution[k];
    }
  }

  if (ref_index < 0 || !errors[static_cast<std::size_t>(ref_index)].empty()) {
    throw ConvergenceError("flux at the reference velocity could not be evaluated: " +
                           (ref_index < 0 ? std::string("not on grid")
                                          : errors[static_cast<std::size_t>(ref_index)]));
  }
  curve.reference_flux = curve.absolute_flux[ref_index];
  if (!(curve.reference_flux > 0.0)) {
    throw ValidationError("reference_velocity", "no quasi-stationary state exists there");
  }
  curve.relative_flux = curve.absolute_flux / curve.reference_flux;
  curve.relative_flux[ref_index] = 1.0;

  const int failed = curve.failed_points();
  if (10 * failed > static_cast<int>(n)) {
    std::string first;
    for (const std::string& e : errors) {
      if (!e.empty()) {
        first = e;
        break;
      }
    }
    throw PartialSweepError(std::to_string(failed) + " of " + std::to_string(n) +
                            " sweep points failed; first: " + first);
  }
  return curve;
}

Eigen::ArrayXd log_flux_slope(const FluxCurve& curve) {
  const Eigen::Index n = curve.size();
  Eigen::ArrayXd slope = Eigen::ArrayXd::Zero(n);
  if (n < 2) return slope;
  const Eigen::ArrayXd logf = curve.absolute_flux.log();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index lo = std::max<Eigen::Index>(i - 1, 0);
    const Eigen::Index hi = std::min<Eigen::Index>(i + 1, n - 1);
    slope[i] = (logf[hi] - logf[lo]) / (curve.velocity_grid[hi] - curve.velocity_grid[lo]);
  }
  return slope;
}

std::vector<double> detect_steps(const FluxCurve& curve, int count) {
  const Eigen::ArrayXd mag = log_flux_slope(curve).abs();
  const Eigen::Index n = mag.size();
  std::vector<std::pair<double, double>> peaks;  // (magnitude, velocity)
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    if (!std::isfinite(mag[i])) continue;
    if (mag[i] > mag[i - 1] && mag[i] >= mag[i + 1]) {
      peaks.emplace_back(mag[i], curve.velocity_grid[i]);
    }
  }
  std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<double> out;
  for (const auto& p : peaks) {
    if (static_cast<int>(out.size()) >= count) break;
    out.push_back(p.second);
  }
  return out;
}

namespace {

double interpolate(const FluxCurve& curve, double v) {
  const Eigen::ArrayXd& x = curve.velocity_grid;
  const Eigen::Index n = x.size();
  if (v <= x[0]) return curve.absolute_flux[0];
  if (v >= x[n - 1]) return curve.absolute_flux[n - 1];
  const auto* begin = x.data();
  const auto* it = std::upper_bound(begin, begin + n, v);
  const Eigen::Index hi = it - begin;
  const Eigen::Index lo = hi - 1;
  const double t = (v - x[lo]) / (x[hi] - x[lo]);
  return (1.0 - t) * curve.absolute_flux[lo] + t * curve.absolute_flux[hi];
}

}  // namespace

double step_contrast(const FluxCurve& curve, const FluxCurve& baseline, double v_step,
                     double half_window) {
  const double lo = v_step - half_window;
  const double hi = v_step + half_window;
  return (interpolate(curve, lo) - interpolate(curve, hi)) / interpolate(baseline, lo);
}

}  // namespace centrifugal
