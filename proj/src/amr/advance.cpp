#include <algorithm>
#include <cmath>
#include <limits>

#include "bouss/amr/amr.hpp"
#include "bouss/core/error.hpp"
#include "bouss/swe/swe.hpp"

namespace bouss::amr {

namespace {

swe::SweParams swe_params(const SimConfig& cfg) { return {cfg.g, cfg.dry_tolerance}; }

double level_dt(const Hierarchy& H, int l) {
  double dt = std::numeric_limits<double>::infinity();
  for (const Patch& p : H.level(l).patches) dt = std::min(dt, swe::compute_dt(p, H.cfg.cfl_target, swe_params(H.cfg)));
  return dt;
}

}  // namespace

double stable_dt(const Hierarchy& H) {
  const bool composite = H.cfg.mode == Mode::sgn_composite;
  double dt = std::numeric_limits<double>::infinity();
  double factor = 1.0;
  for (int l = 1; l <= H.finest(); ++l) {
    dt = std::min(dt, level_dt(H, l) * (composite ? 1.0 : factor));
    if (l < H.finest()) factor *= H.cfg.ratio_time(l);
  }
  return dt;
}

/// Solves for psi on one level and records the solve.
linalg::SolverStats level_solve(Hierarchy& H, int l, std::vector<sgn::SgnFields>& fields, StepCounters& counts) {
  Level& L = H.level(l);
  std::vector<Patch*> ptrs = H.patch_ptrs(l);
  const sgn::SgnParams params = sgn::sgn_params(H.cfg);
  sgn::enumerate_cells(ptrs, H.domain);
  fields.clear();
  for (const Patch* p : ptrs) fields.push_back(sgn::compute_phi_w(*p, params));
  linalg::SolverStats st;
  try {
    st = sgn::solve_dispersive(ptrs, fields, H.domain, params, sgn::solve_options(H.cfg), L.cache);
  } catch (const linalg::KrylovFailure& e) {
    throw Error("level " + std::to_string(l) + " at t=" + std::to_string(L.time) + ": " + e.what());
  }
  ++L.solves;
  L.krylov_iterations += st.iterations;
  if (counts.solves.size() < std::size_t(l)) counts.solves.resize(std::size_t(l), 0);
  ++counts.solves[std::size_t(l - 1)];
  exchange(H, l);
  return st;
}

void advance_level(Hierarchy& H, int l, double dt, double theta0, double theta1, StepCounters& counts) {
  const SimConfig& cfg = H.cfg;
  const bool dispersive = cfg.mode != Mode::swe;
  if (l < cfg.max_levels && H.level(l).steps > 0 && H.level(l).steps % cfg.regrid_interval == 0) regrid(H, l);

  Level& L = H.level(l);
  const sgn::SgnParams params = sgn::sgn_params(cfg);
  fill_ghosts(H, l, theta0);
  if (dispersive) {
    std::vector<sgn::SgnFields> fields;
    level_solve(H, l, fields, counts);
    for (std::size_t k = 0; k < L.patches.size(); ++k) sgn::source_update(L.patches[k], fields[k], dt, params);
    exchange(H, l);
  }
  const bool finer = l < H.finest();
  if (finer) L.snap_old = L.patches;

  StepFlux saved;
  for (Patch& p : L.patches) {
    saved.fx.push_back(p.mass_fx);
    saved.fy.push_back(p.mass_fy);
    p.clear_fluxes();
  }
  sgn::level_swe_step(H.patch_ptrs(l), H.domain, dt, swe_params(cfg), [&] { exchange(H, l); }, swe::SweepOrder::averaged);

  if (finer) {
    StepFlux step;
    for (Patch& p : L.patches) {
      step.fx.push_back(p.mass_fx);
      step.fy.push_back(p.mass_fy);
    }
    fill_ghosts(H, l, theta1);
    if (dispersive) {
      std::vector<sgn::SgnFields> fields;
      level_solve(H, l, fields, counts);
    }
    L.snap_new = L.patches;
    for (Patch& p : H.level(l + 1).patches) p.clear_fluxes();
    const int rt = cfg.ratio_time(l);
    for (int k = 0; k < rt; ++k)
      advance_level(H, l + 1, dt / rt, double(k) / rt, double(k + 1) / rt, counts);
    update_coarse(H, l);
    reflux(H, l, step);
  }

  // Finer levels may have been created during the substeps; re-fetch.
  Level& L2 = H.level(l);
  for (std::size_t k = 0; k < L2.patches.size(); ++k) {
    auto& fx = L2.patches[k].mass_fx.raw();
    auto& fy = L2.patches[k].mass_fy.raw();
    for (std::size_t m = 0; m < fx.size(); ++m) fx[m] += saved.fx[k].raw()[m];
    for (std::size_t m = 0; m < fy.size(); ++m) fy[m] += saved.fy[k].raw()[m];
  }
  L2.time += dt;
  ++L2.steps;
  for (int f = l + 1; f <= H.finest(); ++f) H.level(f).time = L2.time;
}

void coarse_step(Hierarchy& H, double dt, StepCounters& counts) {
  counts.solves.assign(std::size_t(H.cfg.max_levels), 0);
  for (Patch& p : H.level(1).patches) p.clear_fluxes();
  if (H.cfg.mode == Mode::sgn_composite) advance_composite(H, dt, counts);
  else advance_level(H, 1, dt, 0.0, 1.0, counts);
}

}  // namespace bouss::amr
