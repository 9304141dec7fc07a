#include <cmath>

#include "bouss/amr/amr.hpp"
#include "bouss/core/error.hpp"
#include "bouss/swe/swe.hpp"

namespace bouss::amr {

namespace {

struct Sample {
  double eta, hu, hv, psi1, psi2;
  bool dry;
};

const Patch* find_owner(const std::vector<Patch>& patches, int i, int j) {
  for (const Patch& p : patches)
    if (p.box.contains(i, j)) return &p;
  return nullptr;
}

// Value of coarse cell (I, J), reading patch ghost frames when no interior
// holds it and folding across the domain boundary.
Sample coarse_sample(const Hierarchy& H, const std::vector<Patch>& coarse, int level, int I, int J) {
  const Box dom = H.domain.box(level);
  double sx = 1, sy = 1;
  if (!dom.contains(I, J)) {
    bool fx = false, fy = false;
    I = H.domain.fold_i(level, I, &fx);
    J = H.domain.fold_j(level, J, &fy);
    if (fx) sx = -1;
    if (fy) sy = -1;
  }
  const Patch* p = find_owner(coarse, I, J);
  if (!p)
    for (const Patch& q : coarse)
      if (q.box.grow(q.ng).contains(I, J)) {
        p = &q;
        break;
      }
  if (!p)
    throw Error("ghost interpolation: coarse cell (" + std::to_string(I) + "," + std::to_string(J) +
                ") on level " + std::to_string(level) + " is not available");
  const int i = I - p->box.i_lo, j = J - p->box.j_lo;
  const double h = p->h(i, j);
  // A dry coarse cell can hide fine cells below sea level; give it the still-water surface.
  if (h < H.cfg.dry_tolerance) return {H.cfg.sea_level, 0, 0, 0, 0, true};
  return {h + p->B(i, j), sx * p->hu(i, j), sy * p->hv(i, j), sx * p->psi1(i, j), sy * p->psi2(i, j), false};
}

double lerp(double a, double b, double t) { return a + t * (b - a); }

Sample bilinear(const Hierarchy& H, const std::vector<Patch>& coarse, int level, int i, int j) {
  const int r = H.domain.ratios.at(std::size_t(level - 2));
  const double X = (i + 0.5) / r - 0.5, Y = (j + 0.5) / r - 0.5;
  const int I0 = int(std::floor(X)), J0 = int(std::floor(Y));
  const double wx = X - I0, wy = Y - J0;
  const Sample s00 = coarse_sample(H, coarse, level - 1, I0, J0);
  const Sample s10 = coarse_sample(H, coarse, level - 1, I0 + 1, J0);
  const Sample s01 = coarse_sample(H, coarse, level - 1, I0, J0 + 1);
  const Sample s11 = coarse_sample(H, coarse, level - 1, I0 + 1, J0 + 1);
  if (s00.dry || s10.dry || s01.dry || s11.dry) {
    return coarse_sample(H, coarse, level - 1, floor_div(i, r), floor_div(j, r));
  }
  auto bl = [&](double Sample::*m) {
    return lerp(lerp(s00.*m, s10.*m, wx), lerp(s01.*m, s11.*m, wx), wy);
  };
  return {bl(&Sample::eta), bl(&Sample::hu), bl(&Sample::hv), bl(&Sample::psi1), bl(&Sample::psi2), false};
}

CellState to_state(const Sample& s, double B, double dry_tol) {
  const double h = std::max(s.eta - B, 0.0);
  if (s.dry || h < dry_tol) return {h, 0, 0, 0, 0};
  return {h, s.hu, s.hv, s.psi1, s.psi2};
}

}  // namespace

CellState interpolate_from_coarse(const Hierarchy& H, const std::vector<Patch>& coarse, int level, int i, int j,
                                  double B_fine) {
  return to_state(bilinear(H, coarse, level, i, j), B_fine, H.cfg.dry_tolerance);
}

void exchange(Hierarchy& H, int level) {
  std::vector<Patch>& patches = H.level(level).patches;
  const Box dom = H.domain.box(level);
  for (Patch& p : patches) {
    for (int j = -p.ng; j < p.ny() + p.ng; ++j)
      for (int i = -p.ng; i < p.nx() + p.ng; ++i) {
        if (i >= 0 && i < p.nx() && j >= 0 && j < p.ny()) continue;
        const int gi = p.box.i_lo + i, gj = p.box.j_lo + j;
        if (!dom.contains(gi, gj)) continue;
        const Patch* s = find_owner(patches, gi, gj);
        if (s) p.set_state(i, j, s->state(gi - s->box.i_lo, gj - s->box.j_lo));
      }
    swe::fill_domain_bc(p, H.domain);
  }
}

void fill_ghosts(Hierarchy& H, int level, double theta) {
  if (level == 1) {
    exchange(H, 1);
    return;
  }
  if (theta < -1e-9 || theta > 1 + 1e-9)
    throw Error("fill_ghosts: time fraction " + std::to_string(theta) + " outside the coarse step");
  const Level& C = H.level(level - 1);
  const std::vector<Patch>& old_snap = C.snap_old.empty() ? C.patches : C.snap_old;
  const std::vector<Patch>& new_snap = C.snap_new.empty() ? old_snap : C.snap_new;
  std::vector<Patch>& patches = H.level(level).patches;
  const Box dom = H.domain.box(level);
  const double tol = H.cfg.dry_tolerance;
  for (Patch& p : patches) {
    for (int j = -p.ng; j < p.ny() + p.ng; ++j)
      for (int i = -p.ng; i < p.nx() + p.ng; ++i) {
        if (i >= 0 && i < p.nx() && j >= 0 && j < p.ny()) continue;
        const int gi = p.box.i_lo + i, gj = p.box.j_lo + j;
        if (!dom.contains(gi, gj)) continue;
        if (const Patch* s = find_owner(patches, gi, gj)) {
          p.set_state(i, j, s->state(gi - s->box.i_lo, gj - s->box.j_lo));
          continue;
        }
        Sample a = bilinear(H, old_snap, level, gi, gj);
        if (theta > 0.0 && &new_snap != &old_snap) {
          const Sample b = bilinear(H, new_snap, level, gi, gj);
          auto mix = [&](double x, double y) { return x == y ? x : (1.0 - theta) * x + theta * y; };
          if (a.dry || b.dry) {
            if (theta >= 0.5) a = b;
          } else {
            a = {mix(a.eta, b.eta), mix(a.hu, b.hu), mix(a.hv, b.hv), mix(a.psi1, b.psi1), mix(a.psi2, b.psi2), false};
          }
        }
        p.set_state(i, j, to_state(a, p.B(i, j), tol));
      }
    swe::fill_domain_bc(p, H.domain);
  }
}

CellState conservative_from_coarse(const Hierarchy& H, const std::vector<Patch>& coarse, int level, int i, int j,
                                   double B_fine) {
  const int r = H.domain.ratios.at(std::size_t(level - 2));
  const int I = floor_div(i, r), J = floor_div(j, r);
  const Sample c = coarse_sample(H, coarse, level - 1, I, J);
  const Sample w = coarse_sample(H, coarse, level - 1, I - 1, J);
  const Sample e = coarse_sample(H, coarse, level - 1, I + 1, J);
  const Sample s = coarse_sample(H, coarse, level - 1, I, J - 1);
  const Sample n = coarse_sample(H, coarse, level - 1, I, J + 1);
  const double tol = H.cfg.dry_tolerance;
  if (c.dry || w.dry || e.dry || s.dry || n.dry) return to_state(c, B_fine, tol);
  const double ox = (i - I * r + 0.5) / r - 0.5, oy = (j - J * r + 0.5) / r - 0.5;
  auto pl = [&](double Sample::*m) {
    return c.*m + 0.5 * (e.*m - w.*m) * ox + 0.5 * (n.*m - s.*m) * oy;
  };
  const Sample v{pl(&Sample::eta), pl(&Sample::hu), pl(&Sample::hv), pl(&Sample::psi1), pl(&Sample::psi2), false};
  return to_state(v, B_fine, tol);
}

}  // namespace bouss::amr
