#include <algorithm>

#include "bouss/amr/amr.hpp"

namespace bouss::amr {

void regrid(Hierarchy& H, int level) {
  for (int lev = level; lev < H.cfg.max_levels && lev <= H.finest(); ++lev) {
    const int r = H.domain.ratios.at(std::size_t(lev - 1));
    exchange(H, lev);
    const FlagField flags = flag_cells(H, lev);
    const std::vector<Box> boxes = cluster_flags(flags, std::max(1, H.cfg.max_patch_size / r));
    if (boxes.empty()) {
      H.levels.resize(std::size_t(lev));
      return;
    }
    std::vector<Patch> old;
    if (lev + 1 <= H.finest()) old = std::move(H.level(lev + 1).patches);
    const std::vector<Patch>& coarse = H.level(lev).patches;
    std::vector<Patch> fresh;
    for (const Box& cb : boxes) {
      Patch p = make_patch(H.domain, lev + 1, cb.refine(r), H.bathy);
      for (int j = 0; j < p.ny(); ++j)
        for (int i = 0; i < p.nx(); ++i) {
          const int gi = p.box.i_lo + i, gj = p.box.j_lo + j;
          const Patch* src = nullptr;
          for (const Patch& o : old)
            if (o.box.contains(gi, gj)) {
              src = &o;
              break;
            }
          if (src) p.set_state(i, j, src->state(gi - src->box.i_lo, gj - src->box.j_lo));
          else p.set_state(i, j, conservative_from_coarse(H, coarse, lev + 1, gi, gj, p.B(i, j)));
        }
      fresh.push_back(std::move(p));
    }
    if (lev + 1 > H.finest()) {
      H.levels.emplace_back();
      H.level(lev + 1).steps = H.level(lev).steps * H.cfg.ratio_time(lev);
    }
    Level& F = H.level(lev + 1);
    F.patches = std::move(fresh);
    F.time = H.level(lev).time;
    F.snap_old.clear();
    F.snap_new.clear();
    F.cache.invalidate();
    check_nesting(H, lev + 1);
  }
}

}  // namespace bouss::amr
