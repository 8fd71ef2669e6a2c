#include "centrifugal/roughness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "centrifugal/errors.hpp"

namespace centrifugal {

void RoughnessSpectrum::validate() const {
  if (omega.size() < 2 || omega.size() != density.size()) {
    throw ValidationError("spectrum", "needs at least two (omega, f) rows");
  }
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!std::isfinite(omega[i]) || !(omega[i] >= 0.0)) {
      throw ValidationError("spectrum", "omega must be finite and non-negative");
    }
    if (i > 0 && !(omega[i] > omega[i - 1])) {
      throw ValidationError("spectrum", "omega must be strictly increasing");
    }
    if (!std::isfinite(density[i]) || density[i] < 0.0) {
      throw ValidationError("spectrum", "f(omega) must be finite and non-negative");
    }
  }
}

RoughnessSpectrum RoughnessSpectrum::parse(const std::string& text) {
  RoughnessSpectrum s;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    std::string a, b, extra;
    if (!(row >> a)) continue;
    auto number = [&](const std::string& tok) {
      double x = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(line_no, "spectrum: '" + tok + "' is not a number");
      }
      return x;
    };
    if (!(row >> b) || (row >> extra)) throw ParseError(line_no, "spectrum: expected two numbers");
    const double w = number(a);
    const double f = number(b);
    s.omega.push_back(w);
    s.density.push_back(f);
  }
  s.validate();
  return s;
}

RoughnessSpectrum RoughnessSpectrum::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("spectrum", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void RoughnessSpec::validate() const {
  if (!(amplitude_br >= 0.0) || !std::isfinite(amplitude_br)) {
    throw ValidationError("amplitude_br", "must be finite and non-negative");
  }
  if (!(correlation_length_lr > 0.0) || !std::isfinite(correlation_length_lr)) {
    throw ValidationError("correlation_length_lr", "must be finite and positive");
  }
  if (mean_final_energy_Ef && !(*mean_final_energy_Ef > 0.0)) {
    throw ValidationError("mean_final_energy_Ef", "must be positive");
  }
  if (spectrum) spectrum->validate();
}

double roughness_frequency(double v, const RoughnessSpec& spec, const MirrorSpec& mirror) {
  spec.validate();
  mirror.validate();
  if (!(v > 0.0)) throw ValidationError("velocity_v", "must be positive");
  const double omega = v / mirror.radius_R;
  return omega * mirror.radius_R / spec.correlation_length_lr;
}

double resolve_final_energy(const Resonance& state, const RoughnessSpec& spec,
                            const MirrorSpec& mirror, const PhysicalConstants& consts) {
  if (spec.mean_final_energy_Ef) return *spec.mean_final_energy_Ef;
  const double omega_r = roughness_frequency(state.scales.velocity, spec, mirror);
  return state.energy_eps.real() + consts.hbar * omega_r;
}

double simplified_ionization_rate(double v, double final_energy, double amplitude_br,
                                  const MirrorSpec& mirror, const PhysicalConstants& consts) {
  if (!(final_energy > 0.0)) throw ValidationError("mean_final_energy_Ef", "must be positive");
  const double M = consts.neutron_mass;
  const double hbar = consts.hbar;
  return amplitude_br * amplitude_br * mirror.fermi_potential_U0 * v * v * M * M /
         (hbar * hbar * mirror.radius_R * std::sqrt(2.0 * M * final_energy));
}

IonizationRate ionization_probability(const Resonance& state, const RoughnessSpec& spec,
                                      const ScaleSet& scales, const MirrorSpec& mirror,
                                      const PhysicalConstants& consts) {
  spec.validate();
  mirror.validate();
  const double depth = scales.z0 - state.lambda.real();
  if (!(depth > 0.0)) {
    throw DomainError("state n=" + std::to_string(state.index_n) +
                      " lies at or above the barrier top");
  }
  IonizationRate out;
  out.final_energy = resolve_final_energy(state, spec, mirror, consts);
  out.final_energy_warning = out.final_energy < 10.0 * state.energy_eps.real();

  const double M = consts.neutron_mass;
  const double hbar = consts.hbar;
  const double br = spec.amplitude_br;
  const double U0 = mirror.fermi_potential_U0;
  out.rate = br * br * U0 * U0 * M /
             (hbar * hbar * scales.l0 * depth * std::sqrt(2.0 * M * out.final_energy));
  out.simplified_rate =
      simplified_ionization_rate(scales.velocity, out.final_energy, br, mirror, consts);
  return out;
}

IonizationWidth ionization_width(const Resonance& state, const RoughnessSpec& spec,
                                 const ScaleSet& scales, const MirrorSpec& mirror,
                                 const PhysicalConstants& consts) {
  spec.validate();
  mirror.validate();
  IonizationWidth out;
  const double v = scales.velocity;

  if (!spec.spectrum) {
    out.final_energy = resolve_final_energy(state, spec, mirror, consts);
    out.gamma_i = consts.hbar *
                  simplified_ionization_rate(v, out.final_energy, spec.amplitude_br, mirror, consts);
  } else {
    // Trapezoidal average of Ef^{-1/2} weighted by f(omega).
    const RoughnessSpectrum& f = *spec.spectrum;
    const double base = spec.mean_final_energy_Ef ? 0.0 : state.energy_eps.real();
    double norm = 0.0;
    double acc = 0.0;
    for (std::size_t i = 1; i < f.omega.size(); ++i) {
      const double dw = f.omega[i] - f.omega[i - 1];
      auto inv_sqrt = [&](std::size_t k) {
        const double ef = spec.mean_final_energy_Ef ? *spec.mean_final_energy_Ef
                                                    : base + consts.hbar * f.omega[k];
        if (!(ef > 0.0)) throw ValidationError("spectrum", "final energy is not positive");
        return 1.0 / std::sqrt(ef);
      };
      norm += 0.5 * dw * (f.density[i] + f.density[i - 1]);
      acc += 0.5 * dw * (f.density[i] * inv_sqrt(i) + f.density[i - 1] * inv_sqrt(i - 1));
    }
    if (!(norm > 0.0)) throw ValidationError("spectrum", "integral of f(omega) is zero");
    const double mean_inv_sqrt = acc / norm;
    out.final_energy = 1.0 / (mean_inv_sqrt * mean_inv_sqrt);
    out.gamma_i = consts.hbar *
                  simplified_ionization_rate(v, out.final_energy, spec.amplitude_br, mirror, consts);
  }
  out.final_energy_warning = out.final_energy < 10.0 * state.energy_eps.real();
  out.gamma_total = state.width_gamma + out.gamma_i;
  return out;
}

FluxCurve rough_flux_sweep(const MirrorSpec& mirror, const RoughnessSpec& spec,
                           const SweepParams& params, const PopulationModel& model,
                           const FluxOptions& options, const PhysicalConstants& consts) {
  spec.validate();
  const ExtraWidth extra = [&](const Resonance& state, double) {
    return ionization_width(state, spec, state.scales, mirror, consts).gamma_i;
  };
  return flux_sweep_with_width(mirror, params, model, extra, options, consts);
}

ScalingTable potential_scaling_check(const std::vector<double>& u0_list,
                                     const MirrorSpec& mirror_template,
                                     const RoughnessSpec& spec,
                                     const PhysicalConstants& consts) {
  spec.validate();
  const std::set<double> distinct(u0_list.begin(), u0_list.end());
  if (u0_list.size() < 3 || distinct.size() < 3) {
    throw ValidationError("U0_list", "need at least 3 distinct values; the fit is degenerate");
  }

  if (!(spec.amplitude_br > 0.0)) {
    throw ValidationError("amplitude_br", "must be positive for a log-log fit");
  }

  ScalingTable table;
  const Eigen::Index n = static_cast<Eigen::Index>(u0_list.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd log_rate(n);
  Eigen::VectorXd log_v(n);
  Eigen::VectorXd log_ef(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    MirrorSpec mirror = mirror_template;
    mirror.fermi_potential_U0 = u0_list[static_cast<std::size_t>(i)];
    mirror.validate();
    ScalingRow row;
    row.u0 = mirror.fermi_potential_U0;
    row.critical_velocity = critical_velocity_semiclassical(1, mirror, consts);
    row.final_energy = spec.mean_final_energy_Ef
                           ? *spec.mean_final_energy_Ef
                           : consts.hbar * roughness_frequency(row.critical_velocity, spec, mirror);
    row.rate = simplified_ionization_rate(row.critical_velocity, row.final_energy,
                                          spec.amplitude_br, mirror, consts);
    table.rows.push_back(row);
    design(i, 0) = 1.0;
    design(i, 1) = std::log(row.u0);
    log_rate[i] = std::log(row.rate);
    log_v[i] = std::log(row.critical_velocity);
    log_ef[i] = std::log(row.final_energy);
  }

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 2) throw ValidationError("U0_list", "degenerate fit");
  const Eigen::Vector2d coef = qr.solve(log_rate);
  table.intercept = coef[0];
  table.slope = coef[1];
  table.velocity_exponent = 2.0 * qr.solve(log_v)[1];
  table.final_energy_exponent = -0.5 * qr.solve(log_ef)[1];
  return table;
}

}  // namespace centrifugal
