#include "bouss/swe/swe.hpp"

namespace bouss::swe {

namespace {

void copy_cell(Patch& p, int di, int dj, int si, int sj, bool negate_x, bool negate_y) {
  p.h(di, dj) = p.h(si, sj);
  p.hu(di, dj) = negate_x ? -p.hu(si, sj) : p.hu(si, sj);
  p.hv(di, dj) = negate_y ? -p.hv(si, sj) : p.hv(si, sj);
  p.psi1(di, dj) = negate_x ? -p.psi1(si, sj) : p.psi1(si, sj);
  p.psi2(di, dj) = negate_y ? -p.psi2(si, sj) : p.psi2(si, sj);
}

}  // namespace

void fill_domain_bc(Patch& p, const Domain& domain, Edge edge) {
  const Box dom = domain.box(p.level);
  const int ng = p.ng;
  const bool wall = domain.boundary(edge) == BoundaryKind::wall;
  switch (edge) {
    case Edge::left:
      if (p.box.i_lo != dom.i_lo) return;
      for (int j = -ng; j < p.ny() + ng; ++j)
        for (int g = 1; g <= ng; ++g) copy_cell(p, -g, j, wall ? g - 1 : 0, j, wall, false);
      break;
    case Edge::right:
      if (p.box.i_hi != dom.i_hi) return;
      for (int j = -ng; j < p.ny() + ng; ++j)
        for (int g = 1; g <= ng; ++g) {
          const int n = p.nx();
          copy_cell(p, n - 1 + g, j, wall ? n - g : n - 1, j, wall, false);
        }
      break;
    case Edge::bottom:
      if (p.box.j_lo != dom.j_lo) return;
      for (int i = -ng; i < p.nx() + ng; ++i)
        for (int g = 1; g <= ng; ++g) copy_cell(p, i, -g, i, wall ? g - 1 : 0, false, wall);
      break;
    case Edge::top:
      if (p.box.j_hi != dom.j_hi) return;
      for (int i = -ng; i < p.nx() + ng; ++i)
        for (int g = 1; g <= ng; ++g) {
          const int n = p.ny();
          copy_cell(p, i, n - 1 + g, i, wall ? n - g : n - 1, false, wall);
        }
      break;
  }
}

void fill_domain_bc(Patch& p, const Domain& domain) {
  fill_domain_bc(p, domain, Edge::left);
  fill_domain_bc(p, domain, Edge::right);
  fill_domain_bc(p, domain, Edge::bottom);
  fill_domain_bc(p, domain, Edge::top);
}

}  // namespace bouss::swe
