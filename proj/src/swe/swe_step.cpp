#include "bouss/swe/swe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bouss/core/error.hpp"

namespace bouss::swe {

double compute_dt(const Patch& p, double cfl, const SweParams& params) {
  double smax = 0.0;
  for (int j = 0; j < p.ny(); ++j)
    for (int i = 0; i < p.nx(); ++i) {
      const double h = p.h(i, j);
      if (h < params.dry_tolerance) continue;
      const double c = std::sqrt(params.g * h);
      smax = std::max({smax, (std::abs(p.hu(i, j)) / h + c) / p.dx, (std::abs(p.hv(i, j)) / h + c) / p.dy});
    }
  if (smax == 0.0) return std::numeric_limits<double>::infinity();
  return cfl / smax;
}

namespace {

double mc_limiter(double theta) { return std::max(0.0, std::min({0.5 * (1.0 + theta), 2.0, 2.0 * theta})); }

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Work arrays for one grid line; states are in (h, normal, transverse) order.
struct Line {
  std::vector<double> h, hn, ht, B;
  std::vector<RiemannResult> face;
  std::vector<Vec3> corr;
  void resize(std::size_t n) {
    h.resize(n);
    hn.resize(n);
    ht.resize(n);
    B.resize(n);
    face.resize(n);
    corr.resize(n);
  }
};

// Updates cells [ng, ng+n) of a line of length n + 2 ng. Face f sits between
// cells f-1 and f. Returns the max Courant number over the faces used.
double update_line(Line& L, int n, int ng, double dtdx, const SweParams& params, double* mass_flux) {
  const int len = n + 2 * ng;
  for (int f = 1; f < len; ++f) {
    const CellState qa{L.h[std::size_t(f - 1)], L.hn[std::size_t(f - 1)], L.ht[std::size_t(f - 1)], 0, 0};
    const CellState qb{L.h[std::size_t(f)], L.hn[std::size_t(f)], L.ht[std::size_t(f)], 0, 0};
    L.face[std::size_t(f)] =
        riemann_interface(qa, qb, L.B[std::size_t(f - 1)], L.B[std::size_t(f)], Axis::x, params);
  }
  double courant = 0.0;
  for (int f = ng; f <= ng + n; ++f) {
    const RiemannResult& R = L.face[std::size_t(f)];
    Vec3 c{0, 0, 0};
    for (int w = 0; w < 2; ++w) {
      const double s = R.speeds[std::size_t(w)];
      courant = std::max(courant, std::abs(s) * dtdx);
      if (!R.high_order_ok || s == 0.0) continue;
      const Vec3& Z = R.waves[std::size_t(w)];
      const double zz = dot3(Z, Z);
      if (zz == 0.0) continue;
      const int up = s > 0.0 ? f - 1 : f + 1;
      const RiemannResult& U = L.face[std::size_t(up)];
      const double theta = U.high_order_ok ? dot3(U.waves[std::size_t(w)], Z) / zz : 0.0;
      const double phi = mc_limiter(theta);
      const double k = 0.5 * (s > 0.0 ? 1.0 : -1.0) * (1.0 - dtdx * std::abs(s)) * phi;
      for (int m = 0; m < 3; ++m) c[std::size_t(m)] += k * Z[std::size_t(m)];
    }
    L.corr[std::size_t(f)] = c;
  }
  if (courant > 1.0) throw StepRejected(courant);
  for (int c = ng; c < ng + n; ++c) {
    const RiemannResult& Rl = L.face[std::size_t(c)];
    const RiemannResult& Rr = L.face[std::size_t(c + 1)];
    const Vec3& Cl = L.corr[std::size_t(c)];
    const Vec3& Cr = L.corr[std::size_t(c + 1)];
    L.h[std::size_t(c)] -= dtdx * ((Rr.flux_left[0] + Cr[0]) - (Rl.flux_right[0] + Cl[0]));
    L.hn[std::size_t(c)] -= dtdx * ((Rr.flux_left[1] + Cr[1]) - (Rl.flux_right[1] + Cl[1]));
    L.ht[std::size_t(c)] -= dtdx * ((Rr.flux_left[2] + Cr[2]) - (Rl.flux_right[2] + Cl[2]));
  }
  if (mass_flux)
    for (int f = ng; f <= ng + n; ++f)
      mass_flux[f - ng] = L.face[std::size_t(f)].flux_left[0] + L.corr[std::size_t(f)][0];
  return courant;
}

}  // namespace

void sweep(Patch& p, Axis axis, double dt, const SweParams& params, bool ghost_rows) {
  const int ng = p.ng;
  const bool xdir = axis == Axis::x;
  const int n = xdir ? p.nx() : p.ny();
  const int m = xdir ? p.ny() : p.nx();
  const int lo = ghost_rows ? -ng : 0, hi = ghost_rows ? m + ng : m;
  const double dtdx = dt / (xdir ? p.dx : p.dy);
  Line L;
  L.resize(std::size_t(n + 2 * ng));
  std::vector<double> flux(std::size_t(n + 1));
  auto at = [&](Grid2D<double>& g, int k, int r) -> double& { return xdir ? g(k, r) : g(r, k); };
  Grid2D<double>& gn = xdir ? p.hu : p.hv;
  Grid2D<double>& gt = xdir ? p.hv : p.hu;
  Grid2D<double>& mf = xdir ? p.mass_fx : p.mass_fy;
  for (int r = lo; r < hi; ++r) {
    for (int k = -ng; k < n + ng; ++k) {
      const std::size_t c = std::size_t(k + ng);
      L.h[c] = at(p.h, k, r);
      L.hn[c] = at(gn, k, r);
      L.ht[c] = at(gt, k, r);
      L.B[c] = at(p.B, k, r);
    }
    const bool interior = r >= 0 && r < m;
    update_line(L, n, ng, dtdx, params, interior ? flux.data() : nullptr);
    for (int k = 0; k < n; ++k) {
      const std::size_t c = std::size_t(k + ng);
      at(p.h, k, r) = L.h[c];
      at(gn, k, r) = L.hn[c];
      at(gt, k, r) = L.ht[c];
    }
    if (interior)
      for (int f = 0; f <= n; ++f) (xdir ? mf(f, r) : mf(r, f)) += dt * flux[std::size_t(f)];
  }
}

void finalize_dry(Patch& p, const SweParams& params) {
  for (int j = -p.ng; j < p.ny() + p.ng; ++j)
    for (int i = -p.ng; i < p.nx() + p.ng; ++i) {
      if (p.h(i, j) < 0.0) p.h(i, j) = 0.0;
      if (p.h(i, j) < params.dry_tolerance) {
        p.hu(i, j) = 0.0;
        p.hv(i, j) = 0.0;
        p.psi1(i, j) = 0.0;
        p.psi2(i, j) = 0.0;
      }
    }
}

void swe_step(Patch& p, const Domain& domain, double dt, const SweParams& params, bool x_first) {
  const Axis a1 = x_first ? Axis::x : Axis::y;
  const Axis a2 = x_first ? Axis::y : Axis::x;
  sweep(p, a1, dt, params, true);
  fill_domain_bc(p, domain);
  sweep(p, a2, dt, params, false);
  finalize_dry(p, params);
}

}  // namespace bouss::swe
