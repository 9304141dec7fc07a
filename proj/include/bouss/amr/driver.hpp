#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "bouss/amr/amr.hpp"
#include "bouss/analysis/analysis.hpp"

namespace bouss::amr {

struct LevelStats {
  long solves = 0;
  long min_per_coarse_step = 0;
  long max_per_coarse_step = 0;
  long krylov_iterations = 0;
};

struct RunSummary {
  long coarse_steps = 0;
  double final_time = 0;
  std::vector<LevelStats> levels;  // index l-1
  double max_abs_eta = 0;          // max |eta - sea_level| over wet exposed cells, all steps
  double max_abs_psi = 0;          // max |psi| over interior cells, all steps
  double mass_initial = 0;
  double mass_final = 0;
  double wall_seconds = 0;
  int frames_written = 0;
};

/// Called after the initial hierarchy is built and after every output time.
using OutputHook = std::function<void(const Hierarchy& H, double t, int frame)>;

/// Builds the hierarchy, advances coarse steps up to the last output time (or
/// max_steps) and writes frames, gauges and transects under cfg.output_dir
/// unless it is empty. `final` receives the hierarchy at the end of the run.
RunSummary run_driver(const SimConfig& cfg, BathymetryField field, const InitialCondition& ic,
                      const OutputHook& hook = {}, Hierarchy* final = nullptr);

// ---- sampling ------------------------------------------------------------------

struct PointSample {
  CellState q;
  double B = 0;
  double eta = 0;
  int level = 1;
  double x = 0, y = 0;  // cell center
};

/// State of the finest exposed cell containing (x, y). Throws outside the domain.
PointSample sample_point(const Hierarchy& H, double x, double y);

/// Samples n points evenly along the transect segment; consecutive samples that
/// land in the same cell are kept once. s is the arc length of the cell center's
/// projection onto the segment.
std::vector<analysis::TransectRow> sample_transect(const Hierarchy& H, const TransectSpec& spec);

// ---- output formats ------------------------------------------------------------

void write_frame(std::ostream& out, const Hierarchy& H, double t);
void write_manifest(std::ostream& out, const SimConfig& cfg, const RunSummary& s);

/// Level-by-level system and switch mask of level `level`, for offline inspection.
void dump_level_system(const Hierarchy& H, int level, const std::string& matrix_path);
void dump_level_mask(const Hierarchy& H, int level, const std::string& mask_path);

}  // namespace bouss::amr
