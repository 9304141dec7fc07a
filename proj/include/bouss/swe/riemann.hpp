#pragma once

#include <array>

#include "bouss/core/types.hpp"

namespace bouss::swe {

struct SweParams {
  double g = 9.81;
  double dry_tolerance = 1e-3;
};

using Vec3 = std::array<double, 3>;

/// Interface solution in (h, hu, hv) ordering regardless of the normal axis.
///
/// Two f-waves with HLLE (Einfeldt) speeds carry the flux difference plus the
/// bathymetry source g*hbar*(B_R - B_L); the transverse momentum is split with
/// the HLL flux. `flux_left` is the numerical flux used by the left cell and
/// `flux_right` by the right cell: they share the mass component exactly and
/// differ in the normal momentum by the bathymetry source.
/// Momentum components leave out the cell's own hydrostatic pressure g h^2 / 2,
/// which cancels in the cell update.
struct RiemannResult {
  Vec3 amdq{};  // left-going fluctuation
  Vec3 apdq{};  // right-going fluctuation
  Vec3 flux_left{};
  Vec3 flux_right{};
  std::array<Vec3, 2> waves{};
  std::array<double, 2> speeds{};
  bool high_order_ok = true;  // false at wet/dry and wall-reflected interfaces
};

RiemannResult riemann_interface(const CellState& qL, const CellState& qR, double BL, double BR, Axis normal,
                                const SweParams& params);

}  // namespace bouss::swe
