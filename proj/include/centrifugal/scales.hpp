#pragma once

#include <string>

namespace centrifugal {

/// Physical constants in SI units. `codata()` is what every production path
/// uses; other values are only constructed by tests.
struct PhysicalConstants {
  double neutron_mass;  // kg
  double hbar;          // J s
  double nev_to_joule;  // J per neV

  static constexpr PhysicalConstants codata() {
    return {1.67492749804e-27, 1.054571817e-34, 1.602176634e-28};
  }

  void validate() const;
};

/// Cylindrical mirror: curvature radius, arc length along the surface and
/// Fermi potential. Everything is stored in SI; the neV/cm constructors are
/// for I/O code.
struct MirrorSpec {
  double radius_R = 0.0;            // m
  double length_L = 0.0;            // m
  double fermi_potential_U0 = 0.0;  // J
  std::string material_label;

  static MirrorSpec from_lab_units(double radius_cm, double length_cm, double u0_nev,
                                   std::string label = {},
                                   const PhysicalConstants& consts = PhysicalConstants::codata());

  double fermi_potential_nev(const PhysicalConstants& consts = PhysicalConstants::codata()) const {
    return fermi_potential_U0 / consts.nev_to_joule;
  }

  void validate() const;
};

struct BeamSpec {
  double velocity_v = 0.0;  // m/s

  void validate() const;
};

/// Characteristic quantities that make the linearized radial problem
/// dimensionless: lengths in units of l0, energies in units of eps0.
struct ScaleSet {
  double l0;        // m
  double eps0;      // J
  double z0;        // U0 / eps0
  double mu0;       // M v R / hbar
  double accel_a;   // v^2 / R
  double energy_E;  // M v^2 / 2
  double velocity;  // m/s
  double radius;    // m

  double eps0_nev(const PhysicalConstants& consts = PhysicalConstants::codata()) const {
    return eps0 / consts.nev_to_joule;
  }
};

ScaleSet make_scales(const BeamSpec& beam, const MirrorSpec& mirror,
                     const PhysicalConstants& consts = PhysicalConstants::codata());

double classical_angular_momentum(const BeamSpec& beam, const MirrorSpec& mirror,
                                  const PhysicalConstants& consts = PhysicalConstants::codata());

}  // namespace centrifugal
