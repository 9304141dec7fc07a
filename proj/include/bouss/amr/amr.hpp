#pragma once

#include <functional>
#include <vector>

#include "bouss/core/config.hpp"
#include "bouss/core/patch.hpp"
#include "bouss/sgn/sgn.hpp"

namespace bouss::amr {

/// Initial surface and velocity at a point: (eta, u, v).
struct InitialState {
  double eta = 0, u = 0, v = 0;
};
using InitialCondition = std::function<InitialState(double x, double y)>;

struct Level {
  std::vector<Patch> patches;
  double time = 0.0;
  long steps = 0;  // steps taken on this level, used for its regrid interval
  // Snapshots bracketing the current step of this level, read by the next finer level.
  std::vector<Patch> snap_old, snap_new;
  sgn::PrecondCache cache;
  long solves = 0;
  long krylov_iterations = 0;
};

struct Hierarchy {
  SimConfig cfg;
  Domain domain;
  CellBathymetry bathy;
  std::vector<Level> levels;  // levels[0] is level 1

  int finest() const { return int(levels.size()); }
  Level& level(int l) { return levels.at(std::size_t(l - 1)); }
  const Level& level(int l) const { return levels.at(std::size_t(l - 1)); }
  std::vector<Patch*> patch_ptrs(int l);
};

/// Still water where the ground is below sea level; dry land elsewhere.
InitialState lake_at_rest_state(double sea_level);

/// Level 1 spans the domain with one patch; finer levels are generated by
/// flagging the initial data, each filled directly from the initial condition.
Hierarchy build_hierarchy(const SimConfig& cfg, BathymetryField field, const InitialCondition& ic);

// ---- flagging and clustering -------------------------------------------------

/// Flags on one level's full index box; cells not covered by the level are 0.
struct FlagField {
  Box box;
  int level = 1;
  std::vector<unsigned char> flag;     // candidate cells for refinement
  std::vector<unsigned char> allowed;  // cells that may be covered by level+1
  unsigned char& at(std::vector<unsigned char>& v, int i, int j) const {
    return v[std::size_t(j - box.j_lo) * std::size_t(box.nx()) + std::size_t(i - box.i_lo)];
  }
  unsigned char at(const std::vector<unsigned char>& v, int i, int j) const {
    return v[std::size_t(j - box.j_lo) * std::size_t(box.nx()) + std::size_t(i - box.i_lo)];
  }
};

/// Wet cells with |eta - sea_level| > flag_tolerance (subject to regions), plus
/// cells forced by region min_level, dilated by flag_buffer and restricted to
/// cells allowed by regions and properly nested inside the level.
FlagField flag_cells(const Hierarchy& H, int level);

/// Recursive bisection at the flag-signature minimum until each window has
/// efficiency >= 0.6, fits in max_size, and contains only allowed cells.
std::vector<Box> cluster_flags(const FlagField& flags, int max_size);

/// Efficiency threshold used by cluster_flags.
inline constexpr double kClusterEfficiency = 0.6;

// ---- regrid --------------------------------------------------------------------

/// Rebuilds levels level+1 .. max from current flags. New cells copy old fine
/// data where available, else interpolate conservatively from the next coarser
/// level. All involved levels must be at the same time.
void regrid(Hierarchy& H, int level);

/// Throws if any patch of `level` is not properly nested in level-1 or overlaps a sibling.
void check_nesting(const Hierarchy& H, int level);

// ---- ghost cells ---------------------------------------------------------------

/// Copies same-level sibling interiors into ghost cells and applies domain BCs.
void exchange(Hierarchy& H, int level);

/// Full ghost fill: sibling copy, then coarse space-time interpolation at
/// fraction theta of the coarse level's current step, then domain BCs.
void fill_ghosts(Hierarchy& H, int level, double theta);

/// Bilinear (h, hu, hv, psi1, psi2) at fine global cell (i, j) of `level`
/// from a set of coarse patches; h is recovered from eta. Ghost-cell operator.
CellState interpolate_from_coarse(const Hierarchy& H, const std::vector<Patch>& coarse, int level, int i, int j,
                                  double B_fine);

/// Piecewise-linear reconstruction with central slopes in the parent cell;
/// children average back to the parent's eta and momenta. Regrid operator.
CellState conservative_from_coarse(const Hierarchy& H, const std::vector<Patch>& coarse, int level, int i, int j,
                                   double B_fine);

// ---- coarse update -------------------------------------------------------------

/// Conservative average of (h, hu, hv) from level+1 onto covered cells of level.
/// Where some children are dry the surface is averaged over wet children instead
/// (depth capped by the conservative value), which trades mass for rest states.
void update_coarse(Hierarchy& H, int level);

/// Mass-only flux correction at coarse-fine faces. `coarse_flux` holds the
/// coarse step's dt*flux arrays per patch (x faces then y faces).
struct StepFlux {
  std::vector<Grid2D<double>> fx, fy;
};
void reflux(Hierarchy& H, int level, const StepFlux& coarse_flux);

/// Sum of h dx dy over cells not covered by a finer level.
double composite_mass(const Hierarchy& H);

// ---- time stepping -------------------------------------------------------------

struct StepCounters {
  std::vector<long> solves;  // per level, this coarse step
};

/// Stable coarse step given all levels and time ratios (subcycled) or the
/// common step (composite and single level).
double stable_dt(const Hierarchy& H);

/// One step of `level` and, recursively, all finer levels (subcycled).
/// `theta0`/`theta1` locate the step inside the coarser level's step.
void advance_level(Hierarchy& H, int level, double dt, double theta0, double theta1, StepCounters& counts);

/// One step of every level with the same dt and a single coupled psi solve.
void advance_composite(Hierarchy& H, double dt, StepCounters& counts);

/// Unknown kinds of the coupled system.
enum class UnknownKind { exposed, hidden, ghost };

struct CompositeKey {
  int level, i, j;
};

/// Coupled psi system over all levels. Exposed cells carry SGN rows, covered
/// cells referenced by a stencil carry averaging rows, and fine ghost cells
/// carry interpolation rows. Unknowns are interleaved (psi1, psi2) per key.
struct CompositeSystem : sgn::LevelSystem {
  std::vector<CompositeKey> keys;
  std::vector<UnknownKind> kinds;
};

/// Requires ghost cells on every level to be current. `fields[l-1][k]` are the
/// derived arrays of patch k on level l.
CompositeSystem assemble_composite_system(const Hierarchy& H, const std::vector<std::vector<sgn::SgnFields>>& fields);

/// Assembles, solves and scatters psi onto every level; returns the fields
/// used so the caller can apply the source update consistently.
linalg::SolverStats composite_solve(Hierarchy& H, std::vector<std::vector<sgn::SgnFields>>& fields);

/// One coarse step in the configured mode; the step parity alternates the
/// sweep order. Advances every level by dt and regrids as scheduled.
void coarse_step(Hierarchy& H, double dt, StepCounters& counts);

}  // namespace bouss::amr
