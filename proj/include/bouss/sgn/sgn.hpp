#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bouss/core/config.hpp"
#include "bouss/core/grid.hpp"
#include "bouss/core/patch.hpp"
#include "bouss/linalg/csr.hpp"
#include "bouss/linalg/krylov.hpp"
#include "bouss/linalg/precond.hpp"
#include "bouss/swe/riemann.hpp"
#include "bouss/swe/swe.hpp"

namespace bouss::sgn {

struct SgnParams {
  double g = 9.81;
  double alpha = 1.153;
  double h_switch = 5.0;
  double dry_tolerance = 1e-3;
  double sea_level = 0.0;
  // Testing hook: false drops T and every rhs term but (g/alpha) eta_x.
  bool dispersive_terms = true;
};

SgnParams sgn_params(const SimConfig& cfg);

/// Derived per-cell arrays on the patch interior plus one ghost ring.
struct SgnFields {
  Grid2D<double> eta, u, v, phi, w;
  Grid2D<double> eta_x, eta_y, h_x, h_y, B_x, B_y, B_xx, B_yy, B_xy;
  Grid2D<unsigned char> mask;  // 1 = SGN switched off
};

/// Desingularized velocity h*m / (h^2 + max(h, eps) * eps).
double velocity(double h, double m, double eps);

/// A cell is masked when any cell of its 3x3 neighborhood has still-water
/// depth below h_switch or is dry. Covers the interior plus one ghost ring.
Grid2D<unsigned char> switch_mask(const Patch& p, const SgnParams& params);

SgnFields compute_phi_w(const Patch& p, const SgnParams& params);

struct Rhs {
  double r1, r2;
};
Rhs assemble_rhs(const Patch& p, const SgnFields& f, int i, int j, const SgnParams& params);

/// Coefficient of row `row` (0: psi1 equation, 1: psi2 equation) on component
/// `comp` of the cell at offset (di, dj).
struct StencilEntry {
  int di, dj, comp;
  double coeff;
};

/// Row entries of (I + alpha T) for cell (i, j); duplicates are not merged.
void operator_stencil(const Patch& p, const SgnFields& f, int i, int j, int row, const SgnParams& params,
                      std::vector<StencilEntry>& out);

/// Maps a global cell outside the domain onto the interior cell its value is
/// mirrored or copied from. `sign` is -1 when a wall reflects component `comp`.
struct Folded {
  int i, j;
  double sign;
};
Folded fold_target(const Domain& domain, int level, int i, int j, int comp);

// eqn_id values for ghost cells that are not sibling interiors.
inline constexpr int kDirichlet = -1;
inline constexpr int kOutside = -2;

/// Contiguous numbering of all interior cells of one level's patches; ghost
/// cells over a sibling interior take the sibling's number. Returns the count.
int enumerate_cells(const std::vector<Patch*>& patches, const Domain& domain);

struct LevelSystem {
  linalg::CsrMatrix A;
  std::vector<double> rhs;
  std::vector<double> x0;
  std::vector<unsigned char> masked;  // per cell
};

/// Builds (I + alpha T) psi = rhs over one level. Requires enumerate_cells and
/// ghost data (state and Dirichlet psi) to be current.
LevelSystem assemble_level_system(const std::vector<Patch*>& patches, const std::vector<SgnFields>& fields,
                                  const Domain& domain, const SgnParams& params);

struct SolveOptions {
  double rtol = 1e-9;
  int maxit = 1000;
  KrylovKind krylov = KrylovKind::bicgstab;
  PrecondKind precond = PrecondKind::ilu0;
  int reuse_steps = 25;
};
SolveOptions solve_options(const SimConfig& cfg);

/// Keeps a factorization alive across solves on an unchanged grid.
struct PrecondCache {
  std::optional<linalg::Preconditioner> M;
  int uses = 0;
  void invalidate() {
    M.reset();
    uses = 0;
  }
};

/// Assemble, solve and scatter psi into every patch (interior cells only).
/// Non-convergence propagates as linalg::KrylovFailure.
linalg::SolverStats solve_dispersive(const std::vector<Patch*>& patches, const std::vector<SgnFields>& fields,
                                     const Domain& domain, const SgnParams& params, const SolveOptions& opts,
                                     PrecondCache& cache);

/// hu += dt h ((g/alpha) eta_x - psi1), likewise hv; masked cells untouched.
void source_update(Patch& p, const SgnFields& f, double dt, const SgnParams& params);

struct LevelHooks {
  std::function<void()> fill_ghosts;  // full ghost fill at the current time
  std::function<void()> exchange;     // sibling copy plus domain BC only
};

/// One fractional step on a level: psi solve, source update, split SWE step.
/// In `swe_only` mode the first two stages are skipped.
linalg::SolverStats sgn_step(const std::vector<Patch*>& patches, const Domain& domain, double dt,
                             const SgnParams& params, const SolveOptions& opts, PrecondCache& cache,
                             const LevelHooks& hooks, swe::SweepOrder order, bool swe_only);

/// The split hyperbolic step on a level, with ghost exchange between sweeps.
void level_swe_step(const std::vector<Patch*>& patches, const Domain& domain, double dt,
                    const swe::SweParams& params, const std::function<void()>& exchange, swe::SweepOrder order);

}  // namespace bouss::sgn
