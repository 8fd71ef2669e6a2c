#pragma once

#include <optional>
#include <string>
#include <vector>

#include "centrifugal/flux.hpp"
#include "centrifugal/resonance.hpp"
#include "centrifugal/scales.hpp"

namespace centrifugal {

/// Tabulated roughness spectrum f(omega). Only its shape is used: the mean
/// square amplitude comes from RoughnessSpec::amplitude_br.
struct RoughnessSpectrum {
  std::vector<double> omega;    // rad/s, strictly increasing
  std::vector<double> density;  // m^2 s

  void validate() const;
  /// Two whitespace- or comma-separated columns; '#' starts a comment.
  static RoughnessSpectrum parse(const std::string& text);
  static RoughnessSpectrum load(const std::string& path);
};

struct RoughnessSpec {
  double amplitude_br = 0.0;           // m, RMS
  double correlation_length_lr = 0.0;  // m
  std::optional<double> mean_final_energy_Ef;  // J; empty means Re(eps_n) + hbar omega_r
  std::optional<RoughnessSpectrum> spectrum;

  void validate() const;
};

/// omega_r = (v/R) R / l_r = v / l_r.
double roughness_frequency(double v, const RoughnessSpec& spec, const MirrorSpec& mirror);

struct IonizationRate {
  double rate = 0.0;             // state-resolved form, 1/s
  double simplified_rate = 0.0;  // deep-state limit, 1/s
  double final_energy = 0.0;     // J
  bool final_energy_warning = false;  // Ef < 10 Re(eps_n)
};

/// Mean final energy used for a state at its own velocity.
double resolve_final_energy(const Resonance& state, const RoughnessSpec& spec,
                            const MirrorSpec& mirror,
                            const PhysicalConstants& consts = PhysicalConstants::codata());

/// Golden-rule ionization rate, br^2 U0^2 M / (hbar^2 l0 (z0 - lambda) sqrt(2 M Ef)),
/// with the z0 >> lambda limit br^2 U0 v^2 M^2 / (hbar^2 R sqrt(2 M Ef)) alongside.
IonizationRate ionization_probability(const Resonance& state, const RoughnessSpec& spec,
                                      const ScaleSet& scales, const MirrorSpec& mirror,
                                      const PhysicalConstants& consts = PhysicalConstants::codata());

/// Simplified rate as a function of velocity and final energy alone.
double simplified_ionization_rate(double v, double final_energy, double amplitude_br,
                                  const MirrorSpec& mirror,
                                  const PhysicalConstants& consts = PhysicalConstants::codata());

struct IonizationWidth {
  double gamma_i = 0.0;      // J
  double gamma_total = 0.0;  // Gamma_n + Gamma_i, J
  double final_energy = 0.0;
  bool final_energy_warning = false;
};

/// Gamma_i = br^2 U0 v^2 M^2 / (hbar R sqrt(2 M Ef)); with a spectrum the
/// 1/sqrt(Ef) factor is averaged over f(omega) with Ef = Re(eps_n) + hbar omega.
IonizationWidth ionization_width(const Resonance& state, const RoughnessSpec& spec,
                                 const ScaleSet& scales, const MirrorSpec& mirror,
                                 const PhysicalConstants& consts = PhysicalConstants::codata());

FluxCurve rough_flux_sweep(const MirrorSpec& mirror, const RoughnessSpec& spec,
                           const SweepParams& params, const PopulationModel& model,
                           const FluxOptions& options = {},
                           const PhysicalConstants& consts = PhysicalConstants::codata());

struct ScalingRow {
  double u0 = 0.0;              // J
  double critical_velocity = 0.0;
  double final_energy = 0.0;    // J
  double rate = 0.0;            // 1/s
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  double slope = 0.0;
  double intercept = 0.0;
  // Exponent bookkeeping: U0 enters linearly, v^2 with v ~ U0^{3/4}, and
  // Ef^{-1/2}. The three fitted pieces add up to `slope`.
  double potential_exponent = 1.0;
  double velocity_exponent = 0.0;
  double final_energy_exponent = 0.0;
};

/// Rate of the lowest state at v = v_c^1(U0) for every U0, and the log-log
/// slope of rate against U0. The final energy is hbar omega_r unless
/// mean_final_energy_Ef is set.
ScalingTable potential_scaling_check(const std::vector<double>& u0_list,
                                     const MirrorSpec& mirror_template,
                                     const RoughnessSpec& spec,
                                     const PhysicalConstants& consts = PhysicalConstants::codata());

}  // namespace centrifugal
