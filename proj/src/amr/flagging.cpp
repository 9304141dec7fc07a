#include <algorithm>
#include <cmath>
#include <limits>

#include "bouss/amr/amr.hpp"

namespace bouss::amr {

FlagField flag_cells(const Hierarchy& H, int level) {
  const SimConfig& cfg = H.cfg;
  FlagField F;
  F.level = level;
  F.box = H.domain.box(level);
  const std::size_t n = std::size_t(F.box.cells());
  F.flag.assign(n, 0);
  F.allowed.assign(n, 0);
  if (level >= cfg.max_levels) return F;

  std::vector<unsigned char> in_level(n, 0), raw(n, 0), region_ok(n, 0);
  const double dx = H.domain.dx(level), dy = H.domain.dy(level);
  for (const Patch& p : H.level(level).patches)
    for (int j = 0; j < p.ny(); ++j)
      for (int i = 0; i < p.nx(); ++i) {
        const int gi = p.box.i_lo + i, gj = p.box.j_lo + j;
        F.at(in_level, gi, gj) = 1;
        const double x = cell_center(H.domain.x_lower, gi, dx), y = cell_center(H.domain.y_lower, gj, dy);
        int maxlev = cfg.max_levels, minlev = 1;
        bool any = false;
        for (const Region& R : cfg.regions)
          if (R.contains(x, y)) {
            maxlev = any ? std::max(maxlev, R.max_level) : R.max_level;
            minlev = std::max(minlev, R.min_level);
            any = true;
          }
        const bool ok = level + 1 <= maxlev;
        F.at(region_ok, gi, gj) = ok;
        const double h = p.h(i, j);
        const bool wave = h >= cfg.dry_tolerance && std::abs(h + p.B(i, j) - cfg.sea_level) > cfg.flag_tolerance;
        F.at(raw, gi, gj) = (wave && ok) || level + 1 <= minlev;
      }

  const Box& b = F.box;
  auto inside = [&](int i, int j) { return b.contains(i, j); };
  const int buf = std::max(cfg.flag_buffer, 0);
  for (int j = b.j_lo; j <= b.j_hi; ++j)
    for (int i = b.i_lo; i <= b.i_hi; ++i) {
      if (!F.at(in_level, i, j)) continue;
      bool nest = true;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di)
          if (inside(i + di, j + dj) && !F.at(in_level, i + di, j + dj)) nest = false;
      const bool allowed = nest && F.at(region_ok, i, j);
      F.at(F.allowed, i, j) = allowed;
      if (!allowed) continue;
      bool f = false;
      for (int dj = -buf; dj <= buf && !f; ++dj)
        for (int di = -buf; di <= buf && !f; ++di)
          if (inside(i + di, j + dj) && F.at(raw, i + di, j + dj)) f = true;
      F.at(F.flag, i, j) = f;
    }
  return F;
}

namespace {

struct Cut {
  int at = 0;  // cut before this offset from the box's low edge
  long sig = -1;
  double dist = 0;
};

// Cut with the smallest flag signature along one axis; ties go to the middle.
Cut best_cut(const FlagField& F, const Box& box, bool xaxis) {
  const int lo = xaxis ? box.i_lo : box.j_lo;
  const int len = xaxis ? box.nx() : box.ny();
  Cut best{len / 2, -1, 0.0};
  if (len < 2) {
    best.sig = std::numeric_limits<long>::max();
    return best;
  }
  std::vector<long> sig(std::size_t(len), 0);
  for (int j = box.j_lo; j <= box.j_hi; ++j)
    for (int i = box.i_lo; i <= box.i_hi; ++i)
      if (F.at(F.flag, i, j)) ++sig[std::size_t(xaxis ? i - lo : j - lo)];
  for (int c = 1; c < len; ++c) {
    const long s = std::min(sig[std::size_t(c - 1)], sig[std::size_t(c)]);
    const double dist = std::abs(c - 0.5 * len);
    if (best.sig < 0 || s < best.sig || (s == best.sig && dist < best.dist)) best = {c, s, dist};
  }
  return best;
}

void cluster_box(const FlagField& F, Box box, int max_size, std::vector<Box>& out) {
  // Shrink to the flags' bounding box.
  Box bb{box.i_hi + 1, box.i_lo - 1, box.j_hi + 1, box.j_lo - 1};
  long count = 0;
  bool all_allowed = true;
  for (int j = box.j_lo; j <= box.j_hi; ++j)
    for (int i = box.i_lo; i <= box.i_hi; ++i)
      if (F.at(F.flag, i, j)) {
        ++count;
        bb.i_lo = std::min(bb.i_lo, i);
        bb.i_hi = std::max(bb.i_hi, i);
        bb.j_lo = std::min(bb.j_lo, j);
        bb.j_hi = std::max(bb.j_hi, j);
      }
  if (count == 0) return;
  box = bb;
  for (int j = box.j_lo; j <= box.j_hi && all_allowed; ++j)
    for (int i = box.i_lo; i <= box.i_hi && all_allowed; ++i) all_allowed = F.at(F.allowed, i, j);
  const double eff = double(count) / double(box.cells());
  if (eff >= kClusterEfficiency && all_allowed && box.nx() <= max_size && box.ny() <= max_size) {
    out.push_back(box);
    return;
  }
  if (box.nx() == 1 && box.ny() == 1) {
    out.push_back(box);  // a flagged cell is always allowed
    return;
  }
  // Split the longest axis where the flag signature is smallest. A square box
  // compares both axes and cuts both on an exact tie, so transposed flags give
  // transposed boxes.
  const Cut cx = best_cut(F, box, true), cy = best_cut(F, box, false);
  bool split_x = box.nx() > box.ny(), split_y = box.ny() > box.nx();
  if (box.nx() == box.ny()) {
    split_x = cx.sig < cy.sig || (cx.sig == cy.sig && cx.dist <= cy.dist);
    split_y = cy.sig < cx.sig || (cy.sig == cx.sig && cy.dist <= cx.dist);
  }
  std::vector<Box> parts{box};
  auto cut = [&](bool xaxis, int at) {
    std::vector<Box> next;
    for (const Box& b : parts) {
      Box lo = b, hi = b;
      if (xaxis) {
        lo.i_hi = b.i_lo + at - 1;
        hi.i_lo = b.i_lo + at;
      } else {
        lo.j_hi = b.j_lo + at - 1;
        hi.j_lo = b.j_lo + at;
      }
      next.push_back(lo);
      next.push_back(hi);
    }
    parts = std::move(next);
  };
  if (split_x) cut(true, cx.at);
  if (split_y) cut(false, cy.at);
  for (const Box& b : parts) cluster_box(F, b, max_size, out);
}

}  // namespace

std::vector<Box> cluster_flags(const FlagField& flags, int max_size) {
  std::vector<Box> out;
  cluster_box(flags, flags.box, std::max(max_size, 1), out);
  return out;
}

}  // namespace bouss::amr
