#pragma once

#include <array>
#include <vector>

#include "bouss/core/bathymetry.hpp"
#include "bouss/core/config.hpp"
#include "bouss/core/grid.hpp"
#include "bouss/core/types.hpp"

namespace bouss {

/// Physical domain plus the level index spaces induced by the space ratios.
struct Domain {
  double x_lower = 0, x_upper = 1, y_lower = 0, y_upper = 1;
  int mx = 1, my = 1;  // level-1 cells
  std::array<BoundaryKind, 4> bc{BoundaryKind::wall, BoundaryKind::wall, BoundaryKind::wall,
                                 BoundaryKind::wall};
  std::vector<int> ratios;  // space ratio from level l to l+1 at index l-1
  int max_levels = 1;

  static Domain from_config(const SimConfig& cfg);

  /// Product of space ratios from level 1 to `level`.
  int scale(int level) const;
  double dx(int level) const { return (x_upper - x_lower) / (mx * scale(level)); }
  double dy(int level) const { return (y_upper - y_lower) / (my * scale(level)); }
  Box box(int level) const { return {0, mx * scale(level) - 1, 0, my * scale(level) - 1}; }
  BoundaryKind boundary(Edge e) const { return bc[static_cast<int>(e)]; }

  /// Maps an index outside the domain onto the interior cell whose data the
  /// boundary condition copies (mirror for walls, nearest for extrapolation).
  /// Returns -1/+1 sign information through `flipped_x`/`flipped_y` for walls.
  int fold_i(int level, int i, bool* flipped) const;
  int fold_j(int level, int j, bool* flipped) const;
};

/// Cell-averaged bathymetry consistent across levels: finest-level cells take
/// a point sample at their center, and every coarser cell is the mean of its
/// children, summed in row-major order. With this definition the conservative
/// average of a fine lake at rest is a coarse lake at rest bit for bit.
class CellBathymetry {
 public:
  CellBathymetry() = default;
  CellBathymetry(Domain domain, BathymetryField field);

  double value(int level, int i, int j) const;
  const Domain& domain() const { return domain_; }
  const BathymetryField& field() const { return field_; }

 private:
  double interior_value(int level, int i, int j) const;

  Domain domain_;
  BathymetryField field_;
};

/// A rectangular grid at one AMR level. Arrays carry a ghost frame of width `ng`;
/// local index (0,0) is global cell (box.i_lo, box.j_lo).
struct Patch {
  int level = 1;
  Box box;
  double dx = 1, dy = 1;
  double x_origin = 0, y_origin = 0;  // domain lower-left corner
  int ng = 2;

  Grid2D<double> h, hu, hv, psi1, psi2, B;
  Grid2D<int> eqn_id;

  // Time-integrated mass flux through each face, accumulated by the hyperbolic
  // step: fx(i, j) is the face between local cells i-1 and i (i in [0, nx]).
  Grid2D<double> mass_fx, mass_fy;

  int nx() const { return box.nx(); }
  int ny() const { return box.ny(); }
  double xc(int i) const { return cell_center(x_origin, box.i_lo + i, dx); }
  double yc(int j) const { return cell_center(y_origin, box.j_lo + j, dy); }

  CellState state(int i, int j) const { return {h(i, j), hu(i, j), hv(i, j), psi1(i, j), psi2(i, j)}; }
  void set_state(int i, int j, const CellState& q) {
    h(i, j) = q.h;
    hu(i, j) = q.hu;
    hv(i, j) = q.hv;
    psi1(i, j) = q.psi1;
    psi2(i, j) = q.psi2;
  }

  void clear_fluxes();
};

Patch make_patch(const Domain& domain, int level, const Box& box, const CellBathymetry& bathy, int ng = 2);

/// Sum of h * dx * dy over interior cells.
double patch_mass(const Patch& p);

}  // namespace bouss
