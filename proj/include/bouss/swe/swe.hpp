#pragma once

#include "bouss/core/patch.hpp"
#include "bouss/swe/riemann.hpp"

namespace bouss::swe {

/// Largest stable step for one patch: cfl * min(dx, dy) / max(|u| + sqrt(g h)).
/// Returns +inf when every cell is dry or at rest with zero depth.
double compute_dt(const Patch& p, double cfl, const SweParams& params);

/// Fills the ghost cells beyond one physical edge of the domain. Walls mirror
/// the state and negate the normal momentum and the normal psi component.
void fill_domain_bc(Patch& p, const Domain& domain, Edge edge);
void fill_domain_bc(Patch& p, const Domain& domain);

/// One directional, second-order wave-propagation sweep over the patch. With
/// `ghost_rows` the transverse ghost rows are updated too, so a following sweep
/// in the other direction sees consistent data. Accumulates dt * mass flux
/// into the patch face arrays for interior rows. Throws StepRejected if the
/// realized Courant number exceeds one.
void sweep(Patch& p, Axis axis, double dt, const SweParams& params, bool ghost_rows);

/// Clamps negative depths and zeroes momenta and psi in dry cells.
void finalize_dry(Patch& p, const SweParams& params);

/// Order of the two sweeps of a split level step. `averaged` runs both orders
/// from the same state and takes the mean, which is exactly symmetric under
/// exchanging x and y.
enum class SweepOrder { x_first, y_first, averaged };

/// Single-patch dimensionally split step. `x_first` alternates between steps.
/// Ghost cells must be current on entry.
void swe_step(Patch& p, const Domain& domain, double dt, const SweParams& params, bool x_first);

}  // namespace bouss::swe
