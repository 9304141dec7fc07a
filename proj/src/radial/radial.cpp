#include "bouss/radial/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bouss/core/error.hpp"
#include "bouss/linalg/tridiag.hpp"
#include "bouss/swe/riemann.hpp"

namespace bouss::radial {

RadialParams radial_params(const SimConfig& cfg) {
  RadialParams p;
  p.g = cfg.g;
  p.alpha = cfg.alpha;
  p.h_switch = cfg.h_switch;
  p.dry_tolerance = cfg.dry_tolerance;
  p.sea_level = cfg.sea_level;
  p.cfl = cfg.cfl_target;
  p.dispersive = cfg.mode != Mode::swe;
  return p;
}

RadialState make_state(std::vector<double> faces, const std::function<double(double)>& bottom,
                       const std::function<std::pair<double, double>(double)>& eta_u) {
  if (faces.size() < 4) throw Error("radial grid needs at least 3 cells");
  RadialState s;
  const std::size_t n = faces.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(faces[i + 1] > faces[i])) throw Error("radial faces must be strictly increasing");
    const double r = 0.5 * (faces[i] + faces[i + 1]);
    const double B = bottom(r);
    const auto [eta, u] = eta_u(r);
    const double h = std::max(eta - B, 0.0);
    s.r.push_back(r);
    s.dr.push_back(faces[i + 1] - faces[i]);
    s.B.push_back(B);
    s.h.push_back(h);
    s.hu.push_back(h * u);
  }
  s.psi.assign(n, 0.0);
  s.faces = std::move(faces);
  return s;
}

std::vector<double> uniform_faces(double r_lo, double r_hi, int n) {
  if (n < 3 || !(r_hi > r_lo)) throw Error("uniform_faces: need n >= 3 and r_hi > r_lo");
  std::vector<double> f(std::size_t(n) + 1);
  for (int i = 0; i <= n; ++i) f[std::size_t(i)] = r_lo + (r_hi - r_lo) * i / n;
  return f;
}

std::vector<double> graded_faces(double r_hi, const std::function<double(double)>& depth, double dr_deep,
                                 double depth_deep, double dr_min) {
  if (!(dr_min > 0) || !(dr_deep >= dr_min) || !(depth_deep > 0)) throw Error("graded_faces: invalid spacing");
  std::vector<double> f{0.0};
  while (f.back() < r_hi) {
    const double r = f.back();
    const double d = std::max(depth(r), 0.0);
    f.push_back(r + std::max(dr_min, dr_deep * std::sqrt(d / depth_deep)));
  }
  // Snap the last face onto r_hi, merging a sliver cell into its neighbor.
  if (f.size() > 2 && r_hi - f[f.size() - 2] < 0.5 * dr_min) f.pop_back();
  f.back() = r_hi;
  return f;
}

namespace {

constexpr int kGhost = 2;

// State extended by two ghost cells on each side; index k = i + kGhost.
struct Extended {
  std::vector<double> x, h, hu, B, eta, u;
  int n = 0;
};

Extended extend(const RadialState& s, Geometry geom, const RadialParams& p) {
  Extended e;
  const int n = s.size();
  e.n = n;
  const std::size_t len = std::size_t(n + 2 * kGhost);
  e.x.resize(len);
  e.h.resize(len);
  e.hu.resize(len);
  e.B.resize(len);
  for (int i = 0; i < n; ++i) {
    const std::size_t k = std::size_t(i + kGhost);
    e.x[k] = s.r[std::size_t(i)];
    e.h[k] = s.h[std::size_t(i)];
    e.hu[k] = s.hu[std::size_t(i)];
    e.B[k] = s.B[std::size_t(i)];
  }
  const double L = s.faces.back() - s.faces.front();
  for (int g = 1; g <= kGhost; ++g) {
    const std::size_t lo = std::size_t(kGhost - g), hi = std::size_t(n + kGhost - 1 + g);
    if (geom == Geometry::plane) {
      const std::size_t src_lo = std::size_t(n - g + kGhost), src_hi = std::size_t(g - 1 + kGhost);
      e.x[lo] = e.x[src_lo] - L;
      e.h[lo] = e.h[src_lo];
      e.hu[lo] = e.hu[src_lo];
      e.B[lo] = e.B[src_lo];
      e.x[hi] = e.x[src_hi] + L;
      e.h[hi] = e.h[src_hi];
      e.hu[hi] = e.hu[src_hi];
      e.B[hi] = e.B[src_hi];
      continue;
    }
    // Inner face reflects.
    const std::size_t m_lo = std::size_t(kGhost + g - 1);
    e.x[lo] = 2 * s.faces.front() - e.x[m_lo];
    e.h[lo] = e.h[m_lo];
    e.hu[lo] = -e.hu[m_lo];
    e.B[lo] = e.B[m_lo];
    const std::size_t m_hi = std::size_t(n + kGhost - g);
    e.x[hi] = 2 * s.faces.back() - e.x[m_hi];
    if (p.outer == OuterBoundary::wall) {
      e.h[hi] = e.h[m_hi];
      e.hu[hi] = -e.hu[m_hi];
      e.B[hi] = e.B[m_hi];
    } else {
      const std::size_t edge = std::size_t(n + kGhost - 1);
      e.h[hi] = e.h[edge];
      e.hu[hi] = e.hu[edge];
      e.B[hi] = e.B[edge];
    }
  }
  e.eta.resize(len);
  e.u.resize(len);
  for (std::size_t k = 0; k < len; ++k) {
    const bool wet = e.h[k] >= p.dry_tolerance;
    e.eta[k] = wet ? e.h[k] + e.B[k] : p.sea_level;
    e.u[k] = wet ? e.hu[k] / e.h[k] : 0.0;
  }
  return e;
}

// Three-point weights at k for the first and second derivative, exact for quadratics.
struct Weights {
  double d1[3], d2[3];
};

Weights weights(const std::vector<double>& x, std::size_t k) {
  const double hm = x[k] - x[k - 1], hp = x[k + 1] - x[k], hs = hm + hp;
  Weights w;
  w.d1[0] = -hp / (hm * hs);
  w.d1[1] = (hp - hm) / (hm * hp);
  w.d1[2] = hm / (hp * hs);
  w.d2[0] = 2.0 / (hm * hs);
  w.d2[1] = -2.0 / (hm * hp);
  w.d2[2] = 2.0 / (hp * hs);
  return w;
}

double apply(const double (&c)[3], const std::vector<double>& f, std::size_t k) {
  return c[0] * f[k - 1] + c[1] * f[k] + c[2] * f[k + 1];
}

bool wet_neighborhood(const Extended& e, std::size_t k, double dry) {
  return e.h[k - 1] >= dry && e.h[k] >= dry && e.h[k + 1] >= dry;
}

}  // namespace

namespace {

OperatorRow row_at(const Extended& e, std::size_t k, Geometry geom, const RadialParams& p) {
  OperatorRow row;
  const double h = e.h[k];
  if (h < p.dry_tolerance) return row;
  const Weights w = weights(e.x, k);
  const double hr = apply(w.d1, e.h, k), Br = apply(w.d1, e.B, k), Brr = apply(w.d2, e.B, k);
  const double etar = apply(w.d1, e.eta, k);
  const double h23 = h * h / 3.0;
  double c[3];
  for (int m = 0; m < 3; ++m) c[m] = -h23 * w.d2[m] - h * hr * w.d1[m];
  double zero = 0.5 * h * Brr + Br * etar;
  if (geom == Geometry::radial) {
    const double r = e.x[k];
    for (int m = 0; m < 3; ++m) c[m] -= h23 * w.d1[m] / r;
    zero += h23 / (r * r) - h * hr / r - 0.5 * h * Br / r;
  }
  row.lower = p.alpha * c[0];
  row.diag = 1.0 + p.alpha * (c[1] + zero);
  row.upper = p.alpha * c[2];
  return row;
}

std::vector<unsigned char> mask_of(const Extended& e, const RadialParams& p) {
  std::vector<unsigned char> m(std::size_t(e.n), 0);
  for (int i = 0; i < e.n; ++i) {
    const std::size_t k = std::size_t(i + kGhost);
    for (std::size_t q = k - 1; q <= k + 1; ++q)
      if (std::max(p.sea_level - e.B[q], 0.0) < p.h_switch || e.h[q] < p.dry_tolerance) m[std::size_t(i)] = 1;
  }
  return m;
}

}  // namespace

std::vector<unsigned char> radial_mask(const RadialState& s, Geometry geom, const RadialParams& p) {
  return mask_of(extend(s, geom, p), p);
}

OperatorRow radial_operator_row(const RadialState& s, int i, Geometry geom, const RadialParams& p) {
  return row_at(extend(s, geom, p), std::size_t(i + kGhost), geom, p);
}

std::vector<double> radial_rhs(const RadialState& s, Geometry geom, const RadialParams& p) {
  const Extended e = extend(s, geom, p);
  const std::size_t len = e.x.size();
  // phi and w on cells with an interior three-point stencil, zero near dry cells.
  std::vector<double> phi(len, 0.0), wv(len, 0.0);
  for (std::size_t k = 1; k + 1 < len; ++k) {
    if (!wet_neighborhood(e, k, p.dry_tolerance)) continue;
    const Weights w = weights(e.x, k);
    const double u = e.u[k], ur = apply(w.d1, e.u, k), Brr = apply(w.d2, e.B, k);
    if (geom == Geometry::radial) {
      const double r = e.x[k];
      phi[k] = ur * ur + ur * u / r + u * u / (r * r);
    } else {
      phi[k] = ur * ur;
    }
    wv[k] = u * u * Brr;
  }
  std::vector<double> b(std::size_t(s.size()), 0.0);
  for (int i = 0; i < s.size(); ++i) {
    const std::size_t k = std::size_t(i + kGhost);
    const double h = e.h[k];
    if (h < p.dry_tolerance) continue;
    const Weights w = weights(e.x, k);
    const double etar = apply(w.d1, e.eta, k), hr = apply(w.d1, e.h, k), Br = apply(w.d1, e.B, k);
    const double phir = apply(w.d1, phi, k), wr = apply(w.d1, wv, k);
    b[std::size_t(i)] = (p.g / p.alpha) * etar + 2 * h * (h / 3 * phir + phi[k] * (hr + 0.5 * Br)) + 0.5 * h * wr +
                        wv[k] * etar;
  }
  return b;
}

void solve_psi(RadialState& s, Geometry geom, const RadialParams& p) {
  const int n = s.size();
  const Extended e = extend(s, geom, p);
  const std::vector<unsigned char> mask = mask_of(e, p);
  const std::vector<double> b = radial_rhs(s, geom, p);
  std::vector<double> lo(std::size_t(n), 0.0), di(std::size_t(n), 1.0), up(std::size_t(n), 0.0), rhs(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    if (mask[std::size_t(i)]) continue;
    const OperatorRow row = row_at(e, std::size_t(i + kGhost), geom, p);
    lo[std::size_t(i)] = row.lower;
    di[std::size_t(i)] = row.diag;
    up[std::size_t(i)] = row.upper;
    rhs[std::size_t(i)] = b[std::size_t(i)];
  }
  if (geom == Geometry::plane) {
    s.psi = linalg::solve_cyclic_tridiagonal(lo, di, up, rhs);
  } else {
    // psi is odd across walls and copied by extrapolation.
    di[0] -= lo[0];
    lo[0] = 0;
    const std::size_t last = std::size_t(n - 1);
    di[last] += p.outer == OuterBoundary::wall ? -up[last] : up[last];
    up[last] = 0;
    s.psi = linalg::solve_tridiagonal(lo, di, up, rhs);
  }
  for (int i = 0; i < n; ++i)
    if (mask[std::size_t(i)]) s.psi[std::size_t(i)] = 0.0;
}

double stable_dt(const RadialState& s, const RadialParams& p) {
  // Same face wave speeds and widths as the Courant check in the update.
  const Extended e = extend(s, Geometry::plane, p);
  const swe::SweParams sp{p.g, p.dry_tolerance};
  const int n = s.size();
  double dt = std::numeric_limits<double>::infinity();
  for (int f = 1; f < n; ++f) {
    const std::size_t k = std::size_t(f + kGhost);
    const auto R = swe::riemann_interface({e.h[k - 1], e.hu[k - 1], 0, 0, 0}, {e.h[k], e.hu[k], 0, 0, 0}, e.B[k - 1],
                                          e.B[k], Axis::x, sp);
    const double speed = std::max(std::abs(R.speeds[0]), std::abs(R.speeds[1]));
    if (speed > 0) dt = std::min(dt, p.cfl * std::min(s.dr[std::size_t(f - 1)], s.dr[std::size_t(f)]) / speed);
  }
  // Boundary faces see a mirrored or copied neighbor: bounded by the cell speed.
  for (int i : {0, n - 1}) {
    const double h = s.h[std::size_t(i)];
    if (h < p.dry_tolerance) continue;
    const double c = std::abs(s.hu[std::size_t(i)] / h) + std::sqrt(p.g * h);
    dt = std::min(dt, p.cfl * s.dr[std::size_t(i)] / c);
  }
  return dt;
}

namespace {

double mc_limiter(double theta) { return std::max(0.0, std::min({0.5 * (1.0 + theta), 2.0, 2.0 * theta})); }

void source_update(RadialState& s, Geometry geom, double dt, const RadialParams& p) {
  const Extended e = extend(s, geom, p);
  const std::vector<unsigned char> mask = mask_of(e, p);
  for (int i = 0; i < s.size(); ++i) {
    if (mask[std::size_t(i)]) continue;
    const std::size_t k = std::size_t(i + kGhost);
    const Weights w = weights(e.x, k);
    const double etar = apply(w.d1, e.eta, k);
    s.hu[std::size_t(i)] += dt * e.h[k] * ((p.g / p.alpha) * etar - s.psi[std::size_t(i)]);
  }
}

void fv_step(RadialState& s, Geometry geom, double dt, const RadialParams& p) {
  const Extended e = extend(s, geom, p);
  const int n = s.size();
  const std::size_t len = e.x.size();
  const swe::SweParams sp{p.g, p.dry_tolerance};
  // Face f lies between extended cells f-1 and f.
  std::vector<swe::RiemannResult> face(len);
  for (std::size_t f = 1; f < len; ++f)
    face[f] = swe::riemann_interface({e.h[f - 1], e.hu[f - 1], 0, 0, 0}, {e.h[f], e.hu[f], 0, 0, 0}, e.B[f - 1],
                                     e.B[f], Axis::x, sp);
  auto width = [&](std::size_t k) {
    if (k >= kGhost && k < std::size_t(n + kGhost)) return s.dr[k - kGhost];
    return k < kGhost ? s.dr.front() : s.dr.back();
  };
  std::vector<double> fm(len, 0.0), fu(len, 0.0), fm_right(len, 0.0), fu_right(len, 0.0);
  double courant = 0.0;
  for (std::size_t f = kGhost; f <= std::size_t(n + kGhost); ++f) {
    const swe::RiemannResult& R = face[f];
    const double dx = std::min(width(f - 1), width(f));
    double c0 = 0, c1 = 0;
    for (int w = 0; w < 2; ++w) {
      const double sw = R.speeds[std::size_t(w)];
      courant = std::max(courant, std::abs(sw) * dt / dx);
      if (!R.high_order_ok || sw == 0.0) continue;
      const swe::Vec3& Z = R.waves[std::size_t(w)];
      const double zz = Z[0] * Z[0] + Z[1] * Z[1];
      if (zz == 0.0) continue;
      const swe::RiemannResult& U = face[sw > 0 ? f - 1 : f + 1];
      const double theta =
          U.high_order_ok ? (U.waves[std::size_t(w)][0] * Z[0] + U.waves[std::size_t(w)][1] * Z[1]) / zz : 0.0;
      const double dxf = 0.5 * (width(f - 1) + width(f));
      const double k = 0.5 * (sw > 0 ? 1.0 : -1.0) * (1.0 - dt / dxf * std::abs(sw)) * mc_limiter(theta);
      c0 += k * Z[0];
      c1 += k * Z[1];
    }
    fm[f] = R.flux_left[0] + c0;
    fu[f] = R.flux_left[1] + c1;
    fm_right[f] = R.flux_right[0] + c0;
    fu_right[f] = R.flux_right[1] + c1;
  }
  if (courant > 1.0) throw StepRejected(courant);
  for (int i = 0; i < n; ++i) {
    const std::size_t k = std::size_t(i + kGhost);
    const std::size_t ii = std::size_t(i);
    const double dtdx = dt / s.dr[ii];
    if (geom == Geometry::radial) {
      const double a = s.r[ii] * s.dr[ii];
      s.h[ii] -= dt / a * (s.faces[ii + 1] * fm[k + 1] - s.faces[ii] * fm_right[k]);
      s.hu[ii] -= dtdx * (fu[k + 1] - fu_right[k]) + dt * e.hu[k] * e.u[k] / s.r[ii];
    } else {
      s.h[ii] -= dtdx * (fm[k + 1] - fm_right[k]);
      s.hu[ii] -= dtdx * (fu[k + 1] - fu_right[k]);
    }
  }
  for (int i = 0; i < n; ++i) {
    const std::size_t ii = std::size_t(i);
    if (s.h[ii] < 0) s.h[ii] = 0;
    if (s.h[ii] < p.dry_tolerance) {
      s.hu[ii] = 0;
      s.psi[ii] = 0;
    }
  }
}

void step(RadialState& s, Geometry geom, double dt, const RadialParams& p) {
  if (geom == Geometry::radial && s.faces.front() < 0) throw Error("radial grid must start at r >= 0");
  RadialState save = s;
  try {
    if (p.dispersive) {
      solve_psi(s, geom, p);
      source_update(s, geom, dt, p);
    }
    fv_step(s, geom, dt, p);
  } catch (...) {
    s = std::move(save);
    throw;
  }
  s.time += dt;
}

}  // namespace

void radial_step(RadialState& s, double dt, const RadialParams& params) { step(s, Geometry::radial, dt, params); }
void plane_step(RadialState& s, double dt, const RadialParams& params) { step(s, Geometry::plane, dt, params); }

void run_to(RadialState& s, Geometry geom, const RadialParams& p, double t_end) {
  while (s.time < t_end) {
    double dt = stable_dt(s, p);
    const double left = t_end - s.time;
    bool last = false;
    if (!std::isfinite(dt) || dt >= left - 1e-12 * std::max(1.0, t_end)) {
      dt = left;
      last = true;
    }
    for (int attempt = 0;; ++attempt) {
      try {
        step(s, geom, dt, p);
        break;
      } catch (const StepRejected&) {
        if (attempt >= 10) throw;
        dt *= 0.5;
        last = false;
      }
    }
    if (last) s.time = t_end;
  }
}

double radial_mass(const RadialState& s) {
  double m = 0;
  for (int i = 0; i < s.size(); ++i)
    m += s.h[std::size_t(i)] * s.r[std::size_t(i)] * s.dr[std::size_t(i)];
  return 2 * std::numbers::pi * m;
}

double plane_mass(const RadialState& s) {
  double m = 0;
  for (int i = 0; i < s.size(); ++i) m += s.h[std::size_t(i)] * s.dr[std::size_t(i)];
  return m;
}

std::vector<analysis::TransectRow> to_transect(const RadialState& s, const RadialParams& p) {
  std::vector<analysis::TransectRow> rows;
  for (int i = 0; i < s.size(); ++i) {
    const std::size_t ii = std::size_t(i);
    analysis::TransectRow r;
    r.s = r.x = s.r[ii];
    r.y = 0;
    r.h = s.h[ii];
    r.B = s.B[ii];
    r.eta = r.h >= p.dry_tolerance ? r.h + r.B : r.B;
    r.level = 1;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace bouss::radial
