#include <algorithm>

#include "bouss/sgn/sgn.hpp"

namespace bouss::sgn {

SgnParams sgn_params(const SimConfig& cfg) {
  SgnParams p;
  p.g = cfg.g;
  p.alpha = cfg.alpha;
  p.h_switch = cfg.h_switch;
  p.dry_tolerance = cfg.dry_tolerance;
  p.sea_level = cfg.sea_level;
  return p;
}

double velocity(double h, double m, double eps) { return h * m / (h * h + std::max(h, eps) * eps); }

Grid2D<unsigned char> switch_mask(const Patch& p, const SgnParams& params) {
  const int nx = p.nx(), ny = p.ny();
  Grid2D<unsigned char> mask(nx, ny, 1, 0);
  for (int j = -1; j <= ny; ++j)
    for (int i = -1; i <= nx; ++i) {
      bool m = false;
      for (int b = -1; b <= 1 && !m; ++b)
        for (int a = -1; a <= 1 && !m; ++a) {
          const double still = std::max(params.sea_level - p.B(i + a, j + b), 0.0);
          m = still < params.h_switch || p.h(i + a, j + b) < params.dry_tolerance;
        }
      mask(i, j) = m ? 1 : 0;
    }
  return mask;
}

SgnFields compute_phi_w(const Patch& p, const SgnParams& params) {
  const int nx = p.nx(), ny = p.ny(), ng = p.ng;
  const double dx = p.dx, dy = p.dy;
  SgnFields f;
  f.eta = Grid2D<double>(nx, ny, ng);
  f.u = Grid2D<double>(nx, ny, ng);
  f.v = Grid2D<double>(nx, ny, ng);
  for (auto* g : {&f.phi, &f.w, &f.eta_x, &f.eta_y, &f.h_x, &f.h_y, &f.B_x, &f.B_y, &f.B_xx, &f.B_yy, &f.B_xy})
    *g = Grid2D<double>(nx, ny, 1);
  f.mask = switch_mask(p, params);

  const double eps = params.dry_tolerance;
  for (int j = -ng; j < ny + ng; ++j)
    for (int i = -ng; i < nx + ng; ++i) {
      const double h = p.h(i, j);
      f.eta(i, j) = h + p.B(i, j);
      const bool wet = h >= eps;
      f.u(i, j) = wet ? velocity(h, p.hu(i, j), eps) : 0.0;
      f.v(i, j) = wet ? velocity(h, p.hv(i, j), eps) : 0.0;
    }

  const double idx2 = 1.0 / (2 * dx), idy2 = 1.0 / (2 * dy);
  auto cx = [&](const Grid2D<double>& a, int i, int j) { return (a(i + 1, j) - a(i - 1, j)) * idx2; };
  auto cy = [&](const Grid2D<double>& a, int i, int j) { return (a(i, j + 1) - a(i, j - 1)) * idy2; };
  auto cxx = [&](const Grid2D<double>& a, int i, int j) {
    return (a(i + 1, j) - 2 * a(i, j) + a(i - 1, j)) / (dx * dx);
  };
  auto cyy = [&](const Grid2D<double>& a, int i, int j) {
    return (a(i, j + 1) - 2 * a(i, j) + a(i, j - 1)) / (dy * dy);
  };
  auto cxy = [&](const Grid2D<double>& a, int i, int j) {
    return (a(i + 1, j + 1) - a(i + 1, j - 1) - a(i - 1, j + 1) + a(i - 1, j - 1)) / (4 * dx * dy);
  };

  for (int j = -1; j <= ny; ++j)
    for (int i = -1; i <= nx; ++i) {
      f.eta_x(i, j) = cx(f.eta, i, j);
      f.eta_y(i, j) = cy(f.eta, i, j);
      f.h_x(i, j) = cx(p.h, i, j);
      f.h_y(i, j) = cy(p.h, i, j);
      f.B_x(i, j) = cx(p.B, i, j);
      f.B_y(i, j) = cy(p.B, i, j);
      f.B_xx(i, j) = cxx(p.B, i, j);
      f.B_yy(i, j) = cyy(p.B, i, j);
      f.B_xy(i, j) = cxy(p.B, i, j);

      bool dry_near = false;
      for (int b = -1; b <= 1; ++b)
        for (int a = -1; a <= 1; ++a) dry_near = dry_near || p.h(i + a, j + b) < eps;
      if (dry_near) continue;  // phi = w = 0
      const double ux = cx(f.u, i, j), uy = cy(f.u, i, j);
      const double vx = cx(f.v, i, j), vy = cy(f.v, i, j);
      const double div = ux + vy;
      f.phi(i, j) = vx * uy - ux * vy + div * div;
      const double u = f.u(i, j), v = f.v(i, j);
      f.w(i, j) = u * u * f.B_xx(i, j) + 2 * u * v * f.B_xy(i, j) + v * v * f.B_yy(i, j);
    }
  return f;
}

Rhs assemble_rhs(const Patch& p, const SgnFields& f, int i, int j, const SgnParams& params) {
  const double ga = params.g / params.alpha;
  Rhs r{ga * f.eta_x(i, j), ga * f.eta_y(i, j)};
  if (!params.dispersive_terms) return r;
  const double h = p.h(i, j);
  const double phi = f.phi(i, j), w = f.w(i, j);
  const double phi_x = (f.phi(i + 1, j) - f.phi(i - 1, j)) / (2 * p.dx);
  const double phi_y = (f.phi(i, j + 1) - f.phi(i, j - 1)) / (2 * p.dy);
  const double w_x = (f.w(i + 1, j) - f.w(i - 1, j)) / (2 * p.dx);
  const double w_y = (f.w(i, j + 1) - f.w(i, j - 1)) / (2 * p.dy);
  r.r1 += 2 * h * (h / 3 * phi_x + phi * (f.h_x(i, j) + 0.5 * f.B_x(i, j))) + 0.5 * h * w_x + w * f.eta_x(i, j);
  r.r2 += 2 * h * (h / 3 * phi_y + phi * (f.h_y(i, j) + 0.5 * f.B_y(i, j))) + 0.5 * h * w_y + w * f.eta_y(i, j);
  return r;
}

}  // namespace bouss::sgn
