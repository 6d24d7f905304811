#pragma once

#include <map>
#include <string>
#include <vector>

#include "gq/util.hpp"

namespace gq {

// Flat key = value configuration with a published key schema; unknown keys
// are rejected at parse time (exit code 2 in the CLI).
struct ExperimentConfig {
  int schema_version = 1;
  std::string experiment;  // axioms | star | lagrangian | quasimode | trace | evolution
  std::uint64_t seed = 42;
  int threads = 1;
  double tolerance_scale = 1.0;
  std::string out_dir = ".";

  std::string model_name = "sphere";
  double hbar = 1.0;
  std::vector<double> hbar_list;
  int sphere_n = 4;
  double kappa = 1.0;   // sphere sweeps at fixed level
  int truncation = 0;   // plane oracle truncation override (0 = auto)

  int grid_radial = 0, grid_angular = 0;
  double grid_radius = 0.0;

  std::string loop_family = "latitude";  // circle | latitude
  double loop_radius = 1.0;
  bool loop_auto_admissible = true;
  int loop_nodes = 128;

  std::string ham_preset = "spin_z";
  std::string ham_numerator, ham_denominator;  // "zpow,zbarpow,re,im; ..." terms
  int ham_degree = 1;

  int star_basis_nmax = -1;     // -1 = model default
  bool star_emit_structure = true;
  double quasimode_target_radius = 1.0;
  std::vector<double> time_list{0.3, 1.0};
  double evolution_t = 0.25;

  static ExperimentConfig parse_file(const std::string& path);
  static ExperimentConfig parse_text(const std::string& text);
  static std::string schema_text();
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gq
