#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hvlab/grid.hpp"

namespace hvl {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat "key = value" sections parsed from a structured-text config file.
/// Unknown sections or keys are a hard error at RunConfig::from_file time.
struct ConfigFile {
  std::map<std::string, std::map<std::string, std::string>> sections;

  static ConfigFile parse(const std::string& text);
  static ConfigFile load(const std::string& path);

  bool has(const std::string& sec, const std::string& key) const;
  std::string get(const std::string& sec, const std::string& key) const;
  std::string get_or(const std::string& sec, const std::string& key, const std::string& dflt) const;

  /// Apply "SECTION_KEY=value" style overrides (used for env overrides).
  void override_key(const std::string& sec, const std::string& key, const std::string& value);
};

/// Overrides config entries from environment variables named
/// <prefix><SECTION>_<KEY> (uppercase), e.g. HVLAB_RUN_DT, HVLAB_GRID_NX.
/// Only schema-known keys are consulted.
void apply_env_overrides(ConfigFile& f, const std::string& prefix = "HVLAB_");

struct PotentialSpec {
  std::string name = "gaussian";  // coulomb, inverse_power, yukawa, gaussian, soft_coulomb
  double a = 1.0;                 // inverse-power exponent
  double mu = 1.0;                // Yukawa screening
  double eps = 0.5;               // soft-Coulomb regularisation
  double width = 1.0;             // Gaussian width
  double coupling = 1.0;          // overall prefactor
};

struct InitialSpec {
  std::string profile = "gaussian";  // gaussian | fermi | translation_invariant
  double x0 = 0.0;
  double v0 = 0.0;
  double sigma_x = 1.0;
  double sigma_v = 0.3;   // velocity width; for "fermi" the plateau radius
  double edge_scale = 0.5;    // fermi edge width = edge_scale * hbar^edge_power
  double edge_scale_x = 0.0;  // > 0: spatial plateau with edge edge_scale_x * hbar^edge_power
  double edge_power = 0.5;    // exponent of the hbar-dependent edge width
  // smooth compact velocity cutoff (fractions of vmax, 0 = off): the profile
  // is exactly zero beyond taper_v2 so the advection buffer stays clean
  double taper_v1 = 0.0;
  double taper_v2 = 0.0;
};

struct RunConfig {
  Convention convention;
  std::vector<double> hbar_list;  // at least one entry
  double time_horizon = 0.5;      // T
  double dt = 1e-3;
  double grid_length = 10.0;      // L
  int nx = 128;                   // base N_x; may be scaled per-hbar
  std::vector<int> nx_list;       // optional per-hbar override, parallel to hbar_list
  double vmax = 0.0;              // 0 => Wigner-induced velocity grid
  int nv = 0;                     // 0 => nx
  PotentialSpec potential;
  InitialSpec initial;
  std::string output_dir = "out";
  int cadence = 50;               // steps between checkpoints
  int workers = 1;

  static RunConfig from_file(const ConfigFile& f);
  void validate() const;
};

/// Immutable context binding grids, scaling and convention for one hbar.
struct RunContext {
  Convention convention;
  double hbar = 1.0;
  std::int64_t n_particles = 1;
  SpatialGrid grid;
  PhaseGrid phase_grid;
  double time_horizon = 0.5;
  double dt = 1e-3;
  int cadence = 50;
  std::vector<std::string> warnings;

  std::string serialize() const;  // deterministic textual form
};

/// Validates config invariants and binds the context for one hbar entry.
RunContext build_run(const RunConfig& cfg, double hbar, int nx_override = 0);

}  // namespace hvl
