#include "bouss/sgn/sgn.hpp"

namespace bouss::sgn {

void operator_stencil(const Patch& p, const SgnFields& f, int i, int j, int row, const SgnParams& params,
                      std::vector<StencilEntry>& out) {
  out.clear();
  const int self = row;
  if (!params.dispersive_terms) {
    out.push_back({0, 0, self, 1.0});
    return;
  }
  const double a = params.alpha;
  const double h = p.h(i, j);
  const double dx = p.dx, dy = p.dy;
  const double h2 = h * h / 3.0;
  const double cross = -a * h2 / (4 * dx * dy);  // coefficient of d_xy at (+1,+1)
  const int other = 1 - row;

  auto dxy = [&](int comp) {
    out.push_back({1, 1, comp, cross});
    out.push_back({1, -1, comp, -cross});
    out.push_back({-1, 1, comp, -cross});
    out.push_back({-1, -1, comp, cross});
  };
  auto d_x = [&](int comp, double c) {  // c * d/dx
    out.push_back({1, 0, comp, c / (2 * dx)});
    out.push_back({-1, 0, comp, -c / (2 * dx)});
  };
  auto d_y = [&](int comp, double c) {
    out.push_back({0, 1, comp, c / (2 * dy)});
    out.push_back({0, -1, comp, -c / (2 * dy)});
  };

  if (row == 0) {
    // T11
    out.push_back({0, 0, self, 1.0 + a * (2 * h2 / (dx * dx) + 0.5 * h * f.B_xx(i, j) + f.B_x(i, j) * f.eta_x(i, j))});
    out.push_back({1, 0, self, -a * h2 / (dx * dx)});
    out.push_back({-1, 0, self, -a * h2 / (dx * dx)});
    d_x(self, -a * h * f.h_x(i, j));
    // T12
    dxy(other);
    d_x(other, a * 0.5 * h * f.B_y(i, j));
    d_y(other, -a * h * (f.h_x(i, j) + 0.5 * f.B_x(i, j)));
    out.push_back({0, 0, other, a * (0.5 * h * f.B_xy(i, j) + f.B_y(i, j) * f.eta_x(i, j))});
  } else {
    // T22
    out.push_back({0, 0, self, 1.0 + a * (2 * h2 / (dy * dy) + 0.5 * h * f.B_yy(i, j) + f.B_y(i, j) * f.eta_y(i, j))});
    out.push_back({0, 1, self, -a * h2 / (dy * dy)});
    out.push_back({0, -1, self, -a * h2 / (dy * dy)});
    d_y(self, -a * h * f.h_y(i, j));
    // T21
    dxy(other);
    d_x(other, -a * h * (f.h_y(i, j) + 0.5 * f.B_y(i, j)));
    d_y(other, a * 0.5 * h * f.B_x(i, j));
    out.push_back({0, 0, other, a * (0.5 * h * f.B_xy(i, j) + f.B_x(i, j) * f.eta_y(i, j))});
  }
}

Folded fold_target(const Domain& domain, int level, int i, int j, int comp) {
  bool fx = false, fy = false;
  Folded r{domain.fold_i(level, i, &fx), domain.fold_j(level, j, &fy), 1.0};
  // Walls reflect the normal component only.
  if ((fx && comp == 0) != (fy && comp == 1)) r.sign = -1.0;
  return r;
}

}  // namespace bouss::sgn
