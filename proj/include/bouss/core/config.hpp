#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bouss/core/types.hpp"

namespace bouss {

/// Refinement region: cells inside may be refined up to `max_level` and are
/// always refined to at least `min_level`.
struct Region {
  int min_level = 1;
  int max_level = 1;
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;

  bool contains(double x, double y) const { return x >= x1 && x <= x2 && y >= y1 && y <= y2; }
};

struct GaugeLocation {
  double x = 0;
  double y = 0;
};

struct TransectSpec {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  int n = 0;  // 0 disables transect output
};

enum class KrylovKind { bicgstab, gmres };
enum class PrecondKind { jacobi, ilu0 };

struct SimConfig {
  double g = 9.81;
  double alpha = 1.153;
  double h_switch = 5.0;
  double dry_tolerance = 1e-3;
  double sea_level = 0.0;
  double cfl_target = 0.9;

  int max_levels = 1;
  std::vector<int> refine_ratio_space;  // one entry per level transition
  std::vector<int> refine_ratio_time;
  double flag_tolerance = 0.01;
  int flag_buffer = 1;
  int regrid_interval = 2;
  int max_patch_size = 64;
  std::vector<Region> regions;

  double solver_rtol = 1e-9;
  int solver_maxit = 1000;
  KrylovKind krylov = KrylovKind::bicgstab;
  PrecondKind preconditioner = PrecondKind::ilu0;
  int precond_reuse_steps = 25;

  Mode mode = Mode::sgn_subcycled;

  double x_lower = 0, x_upper = 0, y_lower = 0, y_upper = 0;
  int mx = 0, my = 0;
  std::array<BoundaryKind, 4> bc{BoundaryKind::wall, BoundaryKind::wall, BoundaryKind::wall,
                                 BoundaryKind::wall};

  std::vector<double> output_times;
  int max_steps = 1000000;
  std::vector<GaugeLocation> gauges;
  TransectSpec transect;
  std::string output_dir = "output";
  int threads = 1;
  std::string dump_system;  // path prefix; empty disables
  std::string dump_mask;

  /// Scenario keys (bathymetry source, initial condition, radial reference
  /// parameters) are validated by name here and interpreted by the scenario layer.
  std::map<std::string, std::string> scenario;

  BoundaryKind boundary(Edge e) const { return bc[static_cast<int>(e)]; }
  int ratio_space(int level) const;  // ratio between `level` and `level+1`
  int ratio_time(int level) const;
};

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

/// Parses `key=value` lines with `#` comments. Throws ConfigError with a line number.
std::vector<KeyValue> parse_key_values(const std::string& text);

/// Builds a validated SimConfig. Later entries override earlier ones, except
/// `region`, which accumulates.
SimConfig config_from_entries(const std::vector<KeyValue>& entries);

SimConfig load_config(const std::string& path);

/// Reads a file and appends `overrides` (applied after file contents).
SimConfig load_config(const std::string& path, const std::vector<KeyValue>& overrides);

/// Canonical `key=value` rendering of every field, used for run manifests.
std::string to_text(const SimConfig& cfg);

std::string to_string(Mode m);

}  // namespace bouss
