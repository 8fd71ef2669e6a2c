#include "centrifugal/scales.hpp"

#include <cmath>
#include <numbers>

#include "centrifugal/errors.hpp"

namespace centrifugal {

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(field, "must be a finite positive number");
  }
}

}  // namespace

void PhysicalConstants::validate() const {
  require_positive(neutron_mass, "neutron_mass");
  require_positive(hbar, "hbar");
  require_positive(nev_to_joule, "nev_to_joule");
}

MirrorSpec MirrorSpec::from_lab_units(double radius_cm, double length_cm, double u0_nev,
                                      std::string label, const PhysicalConstants& consts) {
  MirrorSpec mirror;
  mirror.radius_R = radius_cm * 1e-2;
  mirror.length_L = length_cm * 1e-2;
  mirror.fermi_potential_U0 = u0_nev * consts.nev_to_joule;
  mirror.material_label = std::move(label);
  mirror.validate();
  return mirror;
}

void MirrorSpec::validate() const {
  require_positive(radius_R, "radius_R");
  require_positive(length_L, "length_L");
  require_positive(fermi_potential_U0, "fermi_potential_U0");
  if (!(length_L < 2.0 * std::numbers::pi * radius_R)) {
    throw ValidationError("length_L", "must be shorter than the full circumference 2*pi*R");
  }
}

void BeamSpec::validate() const { require_positive(velocity_v, "velocity_v"); }

ScaleSet make_scales(const BeamSpec& beam, const MirrorSpec& mirror,
                     const PhysicalConstants& consts) {
  beam.validate();
  mirror.validate();
  consts.validate();

  const double v = beam.velocity_v;
  const double R = mirror.radius_R;
  const double M = consts.neutron_mass;
  const double hbar = consts.hbar;

  ScaleSet s{};
  s.velocity = v;
  s.radius = R;
  s.accel_a = v * v / R;
  s.l0 = std::cbrt(hbar * hbar * R / (2.0 * M * M * v * v));
  s.eps0 = std::cbrt(hbar * hbar * M * v * v * v * v / (2.0 * R * R));
  s.z0 = mirror.fermi_potential_U0 / s.eps0;
  s.mu0 = M * v * R / hbar;
  s.energy_E = 0.5 * M * v * v;
  return s;
}

double classical_angular_momentum(const BeamSpec& beam, const MirrorSpec& mirror,
                                  const PhysicalConstants& consts) {
  beam.validate();
  mirror.validate();
  consts.validate();
  return consts.neutron_mass * beam.velocity_v * mirror.radius_R / consts.hbar;
}

}  // namespace centrifugal
