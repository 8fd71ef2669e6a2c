#pragma once

#include <optional>
#include <string>
#include <vector>

#include "centrifugal/flux.hpp"
#include "centrifugal/roughness.hpp"
#include "centrifugal/scales.hpp"

namespace centrifugal {

struct SweepConfig {
  std::optional<double> v_min;  // m/s
  std::optional<double> v_max;
  std::optional<int> steps;
  std::optional<double> v_ref;
  int n_states = 2;
  std::vector<double> u0_list;  // J
};

/// Everything a run needs, in SI. Sections present in the text are recorded
/// so that a subcommand can reject groups it does not use.
struct RunConfig {
  std::optional<MirrorSpec> mirror;
  std::optional<double> velocity;  // m/s
  int n_max = 8;
  std::optional<SweepConfig> sweep;
  std::optional<RoughnessSpec> roughness;
  PopulationModel population;
  std::string output_path;
  bool plot_script = false;
  int threads = 1;

  /// Throws ValidationError naming the missing key or the unused section.
  void require_for(const std::string& subcommand) const;

  SweepParams sweep_params() const;
};

/// Sections [mirror], [beam], [sweep], [roughness], [output] with key=value
/// pairs; several pairs may share a line and '#' starts a comment.
///
///   [mirror]    R_cm L_cm U0_neV label
///   [beam]      v_mps n_max
///   [sweep]     v_min_mps v_max_mps steps v_ref_mps n_states population
///               band_height_um U0_list_neV (comma separated)
///   [roughness] br_nm lr_um Ef_neV (number or auto) spectrum (file path)
///   [output]    path plot_script threads
///
/// Syntax problems and unknown keys raise ParseError with the line number;
/// out-of-range values raise ValidationError naming the key.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

}  // namespace centrifugal
