#include "bouss/swe/riemann.hpp"

#include <algorithm>
#include <cmath>

namespace bouss::swe {

namespace {

struct Normal {
  double h, hn, ht, B;
};

Vec3 physical_flux(const Normal& q, double u, double v) { return {q.hn, q.hn * u, q.hn * v}; }

}  // namespace

RiemannResult riemann_interface(const CellState& qL, const CellState& qR, double BL, double BR, Axis normal,
                                const SweParams& p) {
  const bool xdir = normal == Axis::x;
  Normal L{qL.h, xdir ? qL.hu : qL.hv, xdir ? qL.hv : qL.hu, BL};
  Normal R{qR.h, xdir ? qR.hu : qR.hv, xdir ? qR.hv : qR.hu, BR};
  const bool wetL = L.h >= p.dry_tolerance;
  const bool wetR = R.h >= p.dry_tolerance;

  RiemannResult out;
  if (!wetL && !wetR) {
    out.high_order_ok = false;
    return out;
  }

  // Original states: used for the cell-side physical fluxes.
  const double uL0 = wetL ? L.hn / L.h : 0.0;
  const double vL0 = wetL ? L.ht / L.h : 0.0;
  const double uR0 = wetR ? R.hn / R.h : 0.0;
  const double vR0 = wetR ? R.ht / R.h : 0.0;
  const Normal L0 = wetL ? L : Normal{0, 0, 0, BL};
  const Normal R0 = wetR ? R : Normal{0, 0, 0, BR};

  // Dry ground above the neighbor's surface acts as a wall.
  bool wall_right = false, wall_left = false;
  if (wetL && !wetR) {
    if (BR >= L.h + BL) {
      wall_right = true;
      R = {L.h, -L.hn, L.ht, BL};
    } else {
      R = {0.0, 0.0, 0.0, BR};
    }
  } else if (wetR && !wetL) {
    if (BL >= R.h + BR) {
      wall_left = true;
      L = {R.h, -R.hn, R.ht, BR};
    } else {
      L = {0.0, 0.0, 0.0, BL};
    }
  }
  out.high_order_ok = wetL && wetR;

  const double hL = L.h, hR = R.h;
  const double uL = hL > 0 ? L.hn / hL : 0.0;
  const double uR = hR > 0 ? R.hn / hR : 0.0;
  const double vL = hL > 0 ? L.ht / hL : 0.0;
  const double vR = hR > 0 ? R.ht / hR : 0.0;
  const double cL = std::sqrt(p.g * hL);
  const double cR = std::sqrt(p.g * hR);

  double s1, s2;
  if (hR <= 0.0) {
    s1 = uL - cL;
    s2 = uL + 2.0 * cL;
  } else if (hL <= 0.0) {
    s1 = uR - 2.0 * cR;
    s2 = uR + cR;
  } else {
    const double sqL = std::sqrt(hL), sqR = std::sqrt(hR);
    const double uhat = (sqL * uL + sqR * uR) / (sqL + sqR);
    const double chat = std::sqrt(0.5 * p.g * (hL + hR));
    s1 = std::min(uL - cL, uhat - chat);
    s2 = std::max(uR + cR, uhat + chat);
  }

  // f-wave splitting of [d(hu), d(hu^2 + g h^2/2) + g hbar dB]; the pressure and
  // source terms combine to g hbar d(eta), which vanishes exactly at rest.
  const double hbar = 0.5 * (hL + hR);
  const double d1 = R.hn - L.hn;
  const double d2 = (R.hn * uR - L.hn * uL) + p.g * hbar * ((hR + R.B) - (hL + L.B));
  const double ds = s2 - s1;
  double beta1 = 0.0, beta2 = 0.0;
  if (ds > 0.0) {
    beta1 = (s2 * d1 - d2) / ds;
    beta2 = (d2 - s1 * d1) / ds;
  }

  // Transverse momentum: HLL flux.
  const double fL3 = L.hn * vL, fR3 = R.hn * vR;
  double fstar3;
  if (s1 >= 0.0) fstar3 = fL3;
  else if (s2 <= 0.0) fstar3 = fR3;
  else fstar3 = (s2 * fL3 - s1 * fR3 + s1 * s2 * (R.ht - L.ht)) / ds;

  Vec3 Z1{beta1, beta1 * s1, fstar3 - fL3};
  Vec3 Z2{beta2, beta2 * s2, fR3 - fstar3};
  out.speeds = {s1, s2};

  auto add = [](Vec3& a, const Vec3& b, double w) {
    for (int k = 0; k < 3; ++k) a[k] += w * b[k];
  };
  Vec3 amdq{}, apdq{};
  for (int w = 0; w < 2; ++w) {
    const Vec3& Z = w == 0 ? Z1 : Z2;
    const double s = out.speeds[std::size_t(w)];
    if (s < 0.0) add(amdq, Z, 1.0);
    else if (s > 0.0) add(apdq, Z, 1.0);
    else {
      add(amdq, Z, 0.5);
      add(apdq, Z, 0.5);
    }
  }
  if (wall_right) apdq = {0, 0, 0};
  if (wall_left) amdq = {0, 0, 0};

  Vec3 fl = physical_flux(L0, uL0, vL0);
  Vec3 fr = physical_flux(R0, uR0, vR0);
  Vec3 flux_left{fl[0] + amdq[0], fl[1] + amdq[1], fl[2] + amdq[2]};
  Vec3 flux_right{fr[0] - apdq[0], fr[1] - apdq[1], fr[2] - apdq[2]};
  if (wall_right) flux_left[0] = 0.0, flux_right = {0, 0, 0};
  if (wall_left) flux_right[0] = 0.0, flux_left = {0, 0, 0};
  // One mass flux per interface keeps the update exactly conservative.
  if (!wall_left && !wall_right) flux_right[0] = flux_left[0];

  out.waves = {Z1, Z2};
  if (wall_left || wall_right) out.waves = {Vec3{}, Vec3{}};
  out.amdq = amdq;
  out.apdq = apdq;
  out.flux_left = flux_left;
  out.flux_right = flux_right;

  if (!xdir) {
    for (Vec3* v : {&out.amdq, &out.apdq, &out.flux_left, &out.flux_right, &out.waves[0], &out.waves[1]})
      std::swap((*v)[1], (*v)[2]);
  }
  return out;
}

}  // namespace bouss::swe
