#include "bouss/core/patch.hpp"

#include "bouss/core/error.hpp"

namespace bouss {

Domain Domain::from_config(const SimConfig& cfg) {
  Domain d;
  d.x_lower = cfg.x_lower;
  d.x_upper = cfg.x_upper;
  d.y_lower = cfg.y_lower;
  d.y_upper = cfg.y_upper;
  d.mx = cfg.mx;
  d.my = cfg.my;
  d.bc = cfg.bc;
  d.max_levels = cfg.max_levels;
  d.ratios.assign(cfg.refine_ratio_space.begin(),
                  cfg.refine_ratio_space.begin() + std::min<std::size_t>(cfg.refine_ratio_space.size(),
                                                                         std::size_t(cfg.max_levels - 1)));
  return d;
}

int Domain::scale(int level) const {
  int s = 1;
  for (int l = 1; l < level; ++l) s *= ratios.at(std::size_t(l - 1));
  return s;
}

namespace {

int fold_index(int i, int n, BoundaryKind lo, BoundaryKind hi, bool* flipped) {
  *flipped = false;
  if (i < 0) {
    if (lo == BoundaryKind::wall) {
      *flipped = true;
      return -1 - i;
    }
    return 0;
  }
  if (i >= n) {
    if (hi == BoundaryKind::wall) {
      *flipped = true;
      return 2 * n - 1 - i;
    }
    return n - 1;
  }
  return i;
}

}  // namespace

int Domain::fold_i(int level, int i, bool* flipped) const {
  return fold_index(i, mx * scale(level), boundary(Edge::left), boundary(Edge::right), flipped);
}

int Domain::fold_j(int level, int j, bool* flipped) const {
  return fold_index(j, my * scale(level), boundary(Edge::bottom), boundary(Edge::top), flipped);
}

CellBathymetry::CellBathymetry(Domain domain, BathymetryField field)
    : domain_(std::move(domain)), field_(std::move(field)) {}

double CellBathymetry::value(int level, int i, int j) const {
  bool fx = false, fy = false;
  const int ii = domain_.fold_i(level, i, &fx);
  const int jj = domain_.fold_j(level, j, &fy);
  return interior_value(level, ii, jj);
}

double CellBathymetry::interior_value(int level, int i, int j) const {
  if (level >= domain_.max_levels) {
    return field_(cell_center(domain_.x_lower, i, domain_.dx(level)),
                  cell_center(domain_.y_lower, j, domain_.dy(level)));
  }
  const int r = domain_.ratios.at(std::size_t(level - 1));
  double sum = 0.0;
  for (int cj = 0; cj < r; ++cj)
    for (int ci = 0; ci < r; ++ci) sum += interior_value(level + 1, i * r + ci, j * r + cj);
  return sum / (r * r);
}

void Patch::clear_fluxes() {
  mass_fx.fill(0.0);
  mass_fy.fill(0.0);
}

Patch make_patch(const Domain& domain, int level, const Box& box, const CellBathymetry& bathy, int ng) {
  if (box.empty()) throw Error("make_patch: empty box");
  if (ng < 2) throw Error("make_patch: ghost width must be >= 2");
  Patch p;
  p.level = level;
  p.box = box;
  p.dx = domain.dx(level);
  p.dy = domain.dy(level);
  p.x_origin = domain.x_lower;
  p.y_origin = domain.y_lower;
  p.ng = ng;
  const int nx = box.nx(), ny = box.ny();
  p.h = Grid2D<double>(nx, ny, ng);
  p.hu = Grid2D<double>(nx, ny, ng);
  p.hv = Grid2D<double>(nx, ny, ng);
  p.psi1 = Grid2D<double>(nx, ny, ng);
  p.psi2 = Grid2D<double>(nx, ny, ng);
  p.B = Grid2D<double>(nx, ny, ng);
  p.eqn_id = Grid2D<int>(nx, ny, ng, -1);
  p.mass_fx = Grid2D<double>(nx + 1, ny, 0);
  p.mass_fy = Grid2D<double>(nx, ny + 1, 0);
  for (int j = -ng; j < ny + ng; ++j)
    for (int i = -ng; i < nx + ng; ++i) p.B(i, j) = bathy.value(level, box.i_lo + i, box.j_lo + j);
  return p;
}

double patch_mass(const Patch& p) {
  double m = 0.0;
  for (int j = 0; j < p.ny(); ++j)
    for (int i = 0; i < p.nx(); ++i) m += p.h(i, j);
  return m * p.dx * p.dy;
}

}  // namespace bouss
