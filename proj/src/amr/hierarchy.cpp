#include <algorithm>

#include "bouss/amr/amr.hpp"
#include "bouss/core/error.hpp"

namespace bouss::amr {

std::vector<Patch*> Hierarchy::patch_ptrs(int l) {
  std::vector<Patch*> out;
  for (Patch& p : level(l).patches) out.push_back(&p);
  return out;
}

InitialState lake_at_rest_state(double sea_level) { return {sea_level, 0.0, 0.0}; }

namespace {

void init_patch(Patch& p, const InitialCondition& ic) {
  for (int j = 0; j < p.ny(); ++j)
    for (int i = 0; i < p.nx(); ++i) {
      const InitialState s = ic(p.xc(i), p.yc(j));
      const double h = std::max(s.eta - p.B(i, j), 0.0);
      p.h(i, j) = h;
      p.hu(i, j) = h * s.u;
      p.hv(i, j) = h * s.v;
      p.psi1(i, j) = 0.0;
      p.psi2(i, j) = 0.0;
    }
}

bool covered_by(const std::vector<Patch>& fine, int r, int I, int J) {
  for (const Patch& f : fine) {
    const Box& b = f.box;
    if (I >= floor_div(b.i_lo, r) && I <= floor_div(b.i_hi, r) && J >= floor_div(b.j_lo, r) &&
        J <= floor_div(b.j_hi, r))
      return true;
  }
  return false;
}

}  // namespace

Hierarchy build_hierarchy(const SimConfig& cfg, BathymetryField field, const InitialCondition& ic) {
  Hierarchy H;
  H.cfg = cfg;
  H.domain = Domain::from_config(cfg);
  H.bathy = CellBathymetry(H.domain, std::move(field));
  H.levels.emplace_back();
  H.levels[0].patches.push_back(make_patch(H.domain, 1, H.domain.box(1), H.bathy));
  init_patch(H.levels[0].patches[0], ic);
  for (int l = 1; l < cfg.max_levels; ++l) {
    fill_ghosts(H, l, 0.0);
    const FlagField flags = flag_cells(H, l);
    const int r = H.domain.ratios.at(std::size_t(l - 1));
    const std::vector<Box> boxes = cluster_flags(flags, std::max(1, cfg.max_patch_size / r));
    if (boxes.empty()) break;
    Level fine;
    for (const Box& b : boxes) {
      fine.patches.push_back(make_patch(H.domain, l + 1, b.refine(r), H.bathy));
      init_patch(fine.patches.back(), ic);
    }
    H.levels.push_back(std::move(fine));
    check_nesting(H, l + 1);
  }
  for (int l = H.finest() - 1; l >= 1; --l) update_coarse(H, l);
  for (int l = 1; l <= H.finest(); ++l) fill_ghosts(H, l, 0.0);
  return H;
}

void check_nesting(const Hierarchy& H, int level) {
  const Level& L = H.level(level);
  for (std::size_t a = 0; a < L.patches.size(); ++a)
    for (std::size_t b = a + 1; b < L.patches.size(); ++b)
      if (!intersect(L.patches[a].box, L.patches[b].box).empty())
        throw Error("level " + std::to_string(level) + ": patches overlap");
  if (level == 1) return;
  const int r = H.domain.ratios.at(std::size_t(level - 2));
  const Box dom = H.domain.box(level - 1);
  const std::vector<Patch>& coarse = H.level(level - 1).patches;
  for (const Patch& p : L.patches) {
    const Box& b = p.box;
    if (b.i_lo % r || (b.i_hi + 1) % r || b.j_lo % r || (b.j_hi + 1) % r)
      throw Error("level " + std::to_string(level) + ": patch not aligned with coarse cells");
    const Box cb{b.i_lo / r, (b.i_hi + 1) / r - 1, b.j_lo / r, (b.j_hi + 1) / r - 1};
    const Box need = intersect(cb.grow(1), dom);
    for (int J = need.j_lo; J <= need.j_hi; ++J)
      for (int I = need.i_lo; I <= need.i_hi; ++I) {
        bool ok = false;
        for (const Patch& c : coarse) ok = ok || c.box.contains(I, J);
        if (!ok)
          throw Error("level " + std::to_string(level) + ": patch not properly nested at coarse cell (" +
                      std::to_string(I) + "," + std::to_string(J) + ")");
      }
  }
}

void update_coarse(Hierarchy& H, int level) {
  if (level >= H.finest()) return;
  const int r = H.domain.ratios.at(std::size_t(level - 1));
  const double inv = 1.0 / (r * r);
  const double tol = H.cfg.dry_tolerance;
  for (Patch& c : H.level(level).patches)
    for (const Patch& f : H.level(level + 1).patches) {
      const Box cb{f.box.i_lo / r, (f.box.i_hi + 1) / r - 1, f.box.j_lo / r, (f.box.j_hi + 1) / r - 1};
      const Box ov = intersect(cb, c.box);
      if (ov.empty()) continue;
      for (int J = ov.j_lo; J <= ov.j_hi; ++J)
        for (int I = ov.i_lo; I <= ov.i_hi; ++I) {
          double sh = 0, su = 0, sv = 0, seta = 0;
          int wet = 0;
          for (int cj = 0; cj < r; ++cj)
            for (int ci = 0; ci < r; ++ci) {
              const int fi = I * r + ci - f.box.i_lo, fj = J * r + cj - f.box.j_lo;
              sh += f.h(fi, fj);
              su += f.hu(fi, fj);
              sv += f.hv(fi, fj);
              if (f.h(fi, fj) >= tol) {
                seta += f.h(fi, fj) + f.B(fi, fj);
                ++wet;
              }
            }
          const int li = I - c.box.i_lo, lj = J - c.box.j_lo;
          double scale = 1.0;
          c.h(li, lj) = sh * inv;
          if (wet < r * r && c.h(li, lj) > 0) {
            // Partly dry: the surface comes from the wet children, capped by the
            // averaged depth, so a shoreline at rest stays at rest.
            const double h = wet == 0 ? 0.0 : std::min(c.h(li, lj), std::max(seta / wet - c.B(li, lj), 0.0));
            scale = h / c.h(li, lj);
            c.h(li, lj) = h;
          }
          c.hu(li, lj) = su * inv * scale;
          c.hv(li, lj) = sv * inv * scale;
        }
    }
}

void reflux(Hierarchy& H, int level, const StepFlux& cf) {
  if (level >= H.finest()) return;
  const int r = H.domain.ratios.at(std::size_t(level - 1));
  const std::vector<Patch>& fine = H.level(level + 1).patches;
  auto fine_face_x = [&](int fi_face, int fj) -> double {
    // face between fine cells fi_face-1 and fi_face; belongs to the patch on either side
    for (const Patch& f : fine) {
      if (fj < f.box.j_lo || fj > f.box.j_hi) continue;
      if (fi_face == f.box.i_lo || fi_face == f.box.i_hi + 1) return f.mass_fx(fi_face - f.box.i_lo, fj - f.box.j_lo);
    }
    throw Error("reflux: no fine face");
  };
  auto fine_face_y = [&](int fi, int fj_face) -> double {
    for (const Patch& f : fine) {
      if (fi < f.box.i_lo || fi > f.box.i_hi) continue;
      if (fj_face == f.box.j_lo || fj_face == f.box.j_hi + 1) return f.mass_fy(fi - f.box.i_lo, fj_face - f.box.j_lo);
    }
    throw Error("reflux: no fine face");
  };
  std::vector<Patch>& coarse = H.level(level).patches;
  const Box dom = H.domain.box(level);
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    Patch& c = coarse[k];
    const Grid2D<double>& fx = cf.fx[k];
    const Grid2D<double>& fy = cf.fy[k];
    for (int j = 0; j < c.ny(); ++j)
      for (int i = 0; i < c.nx(); ++i) {
        const int I = c.box.i_lo + i, J = c.box.j_lo + j;
        if (covered_by(fine, r, I, J)) continue;
        double dh = 0.0;
        // right neighbor covered: this cell's right face is a coarse-fine face
        if (I + 1 <= dom.i_hi && covered_by(fine, r, I + 1, J)) {
          double s = 0;
          for (int m = 0; m < r; ++m) s += fine_face_x((I + 1) * r, J * r + m);
          dh += (fx(i + 1, j) - s / r) / c.dx;
        }
        if (I - 1 >= dom.i_lo && covered_by(fine, r, I - 1, J)) {
          double s = 0;
          for (int m = 0; m < r; ++m) s += fine_face_x(I * r, J * r + m);
          dh += (s / r - fx(i, j)) / c.dx;
        }
        if (J + 1 <= dom.j_hi && covered_by(fine, r, I, J + 1)) {
          double s = 0;
          for (int m = 0; m < r; ++m) s += fine_face_y(I * r + m, (J + 1) * r);
          dh += (fy(i, j + 1) - s / r) / c.dy;
        }
        if (J - 1 >= dom.j_lo && covered_by(fine, r, I, J - 1)) {
          double s = 0;
          for (int m = 0; m < r; ++m) s += fine_face_y(I * r + m, J * r);
          dh += (s / r - fy(i, j)) / c.dy;
        }
        if (dh != 0.0) c.h(i, j) = std::max(c.h(i, j) + dh, 0.0);
      }
  }
}

double composite_mass(const Hierarchy& H) {
  double m = 0.0;
  for (int l = 1; l <= H.finest(); ++l) {
    const bool has_fine = l < H.finest();
    const int r = has_fine ? H.domain.ratios.at(std::size_t(l - 1)) : 1;
    for (const Patch& p : H.level(l).patches) {
      double s = 0.0;
      for (int j = 0; j < p.ny(); ++j)
        for (int i = 0; i < p.nx(); ++i)
          if (!has_fine || !covered_by(H.level(l + 1).patches, r, p.box.i_lo + i, p.box.j_lo + j)) s += p.h(i, j);
      m += s * p.dx * p.dy;
    }
  }
  return m;
}

}  // namespace bouss::amr
