#include "bouss/core/error.hpp"
#include "bouss/sgn/sgn.hpp"

namespace bouss::sgn {

int enumerate_cells(const std::vector<Patch*>& patches, const Domain& domain) {
  for (std::size_t a = 0; a < patches.size(); ++a)
    for (std::size_t b = a + 1; b < patches.size(); ++b)
      if (!intersect(patches[a]->box, patches[b]->box).empty())
        throw Error("enumerate_cells: patches " + std::to_string(a) + " and " + std::to_string(b) + " overlap");

  std::vector<int> offset(patches.size());
  int n = 0;
  for (std::size_t k = 0; k < patches.size(); ++k) {
    Patch& p = *patches[k];
    offset[k] = n;
    p.eqn_id.fill(kDirichlet);
    for (int j = 0; j < p.ny(); ++j)
      for (int i = 0; i < p.nx(); ++i) p.eqn_id(i, j) = n++;
  }

  for (Patch* pp : patches) {
    Patch& p = *pp;
    const int level = p.level;
    const Box dom = domain.box(level);
    for (int j = -p.ng; j < p.ny() + p.ng; ++j)
      for (int i = -p.ng; i < p.nx() + p.ng; ++i) {
        if (i >= 0 && i < p.nx() && j >= 0 && j < p.ny()) continue;
        const int gi = p.box.i_lo + i, gj = p.box.j_lo + j;
        if (!dom.contains(gi, gj)) {
          p.eqn_id(i, j) = kOutside;
          continue;
        }
        for (std::size_t k = 0; k < patches.size(); ++k) {
          const Box& b = patches[k]->box;
          if (b.contains(gi, gj)) {
            p.eqn_id(i, j) = offset[k] + (gj - b.j_lo) * b.nx() + (gi - b.i_lo);
            break;
          }
        }
      }
  }
  return n;
}

}  // namespace bouss::sgn
