#include "bouss/core/error.hpp"
#include "bouss/sgn/sgn.hpp"
#include "bouss/swe/swe.hpp"

namespace bouss::sgn {

namespace {

double psi_comp(const Patch& p, int i, int j, int comp) { return comp == 0 ? p.psi1(i, j) : p.psi2(i, j); }

}  // namespace

SolveOptions solve_options(const SimConfig& cfg) {
  SolveOptions o;
  o.rtol = cfg.solver_rtol;
  o.maxit = cfg.solver_maxit;
  o.krylov = cfg.krylov;
  o.precond = cfg.preconditioner;
  o.reuse_steps = cfg.precond_reuse_steps;
  return o;
}

LevelSystem assemble_level_system(const std::vector<Patch*>& patches, const std::vector<SgnFields>& fields,
                                  const Domain& domain, const SgnParams& params) {
  int n = 0;
  for (const Patch* p : patches) n += int(p->box.cells());
  LevelSystem sys;
  sys.rhs.assign(std::size_t(2 * n), 0.0);
  sys.x0.assign(std::size_t(2 * n), 0.0);
  sys.masked.assign(std::size_t(n), 0);
  std::vector<linalg::Triplet> trip;
  trip.reserve(std::size_t(2 * n) * 13);
  std::vector<StencilEntry> st;

  for (std::size_t k = 0; k < patches.size(); ++k) {
    const Patch& p = *patches[k];
    const SgnFields& f = fields[k];
    for (int j = 0; j < p.ny(); ++j)
      for (int i = 0; i < p.nx(); ++i) {
        const int id = p.eqn_id(i, j);
        if (f.mask(i, j)) {
          sys.masked[std::size_t(id)] = 1;
          trip.push_back({2 * id, 2 * id, 1.0});
          trip.push_back({2 * id + 1, 2 * id + 1, 1.0});
          continue;
        }
        sys.x0[std::size_t(2 * id)] = p.psi1(i, j);
        sys.x0[std::size_t(2 * id + 1)] = p.psi2(i, j);
        const Rhs r = assemble_rhs(p, f, i, j, params);
        sys.rhs[std::size_t(2 * id)] = r.r1;
        sys.rhs[std::size_t(2 * id + 1)] = r.r2;
        for (int row = 0; row < 2; ++row) {
          const int R = 2 * id + row;
          operator_stencil(p, f, i, j, row, params, st);
          for (const StencilEntry& e : st) {
            int ti = i + e.di, tj = j + e.dj;
            double c = e.coeff;
            int tid = p.eqn_id(ti, tj);
            if (tid == kOutside) {
              const Folded fd = fold_target(domain, p.level, p.box.i_lo + ti, p.box.j_lo + tj, e.comp);
              ti = fd.i - p.box.i_lo;
              tj = fd.j - p.box.j_lo;
              c *= fd.sign;
              if (!p.eqn_id.in_range(ti, tj)) throw Error("assemble_level_system: fold left the ghost frame");
              tid = p.eqn_id(ti, tj);
              if (tid == kOutside) throw Error("assemble_level_system: fold landed outside the domain");
            }
            if (tid >= 0) trip.push_back({R, 2 * tid + e.comp, c});
            else sys.rhs[std::size_t(R)] -= c * psi_comp(p, ti, tj, e.comp);
          }
        }
      }
  }
  sys.A = linalg::csr_from_entries(2 * n, trip);
  return sys;
}

linalg::SolverStats solve_dispersive(const std::vector<Patch*>& patches, const std::vector<SgnFields>& fields,
                                     const Domain& domain, const SgnParams& params, const SolveOptions& opts,
                                     PrecondCache& cache) {
  LevelSystem sys = assemble_level_system(patches, fields, domain, params);
  linalg::SolverStats stats;
  if (sys.A.n_rows == 0) {
    stats.converged = true;
    return stats;
  }
  bool reused = true;
  if (!cache.M || cache.M->size() != sys.A.n_rows || cache.uses >= opts.reuse_steps) {
    cache.M = linalg::make_preconditioner(sys.A, opts.precond, 2);
    cache.uses = 0;
    reused = false;
  }
  ++cache.uses;
  linalg::SolveResult res = linalg::solve_krylov(sys.A, sys.rhs, sys.x0, opts.rtol, opts.maxit, *cache.M, opts.krylov);
  res.stats.preconditioner_reused = reused;
  for (Patch* pp : patches) {
    Patch& p = *pp;
    for (int j = 0; j < p.ny(); ++j)
      for (int i = 0; i < p.nx(); ++i) {
        const int id = p.eqn_id(i, j);
        const bool m = sys.masked[std::size_t(id)];
        p.psi1(i, j) = m ? 0.0 : res.x[std::size_t(2 * id)];
        p.psi2(i, j) = m ? 0.0 : res.x[std::size_t(2 * id + 1)];
      }
  }
  return res.stats;
}

void source_update(Patch& p, const SgnFields& f, double dt, const SgnParams& params) {
  const double ga = params.g / params.alpha;
  for (int j = 0; j < p.ny(); ++j)
    for (int i = 0; i < p.nx(); ++i) {
      if (f.mask(i, j)) continue;
      const double h = p.h(i, j);
      p.hu(i, j) += dt * h * (ga * f.eta_x(i, j) - p.psi1(i, j));
      p.hv(i, j) += dt * h * (ga * f.eta_y(i, j) - p.psi2(i, j));
    }
}

namespace {

void split_step(const std::vector<Patch*>& patches, double dt, const swe::SweParams& params,
                const std::function<void()>& exchange, bool x_first) {
  const Axis a1 = x_first ? Axis::x : Axis::y;
  const Axis a2 = x_first ? Axis::y : Axis::x;
  for (Patch* p : patches) swe::sweep(*p, a1, dt, params, true);
  if (exchange) exchange();
  for (Patch* p : patches) swe::sweep(*p, a2, dt, params, false);
  for (Patch* p : patches) swe::finalize_dry(*p, params);
}

struct SweptFields {
  Grid2D<double> h, hu, hv, psi1, psi2, fx, fy;
};

SweptFields capture(const Patch& p) { return {p.h, p.hu, p.hv, p.psi1, p.psi2, p.mass_fx, p.mass_fy}; }

}  // namespace

void level_swe_step(const std::vector<Patch*>& patches, const Domain& domain, double dt,
                    const swe::SweParams& params, const std::function<void()>& exchange, swe::SweepOrder order) {
  (void)domain;
  if (order != swe::SweepOrder::averaged) {
    split_step(patches, dt, params, exchange, order == swe::SweepOrder::x_first);
    return;
  }
  std::vector<SweptFields> start, first;
  for (const Patch* p : patches) start.push_back(capture(*p));
  split_step(patches, dt, params, exchange, true);
  for (std::size_t k = 0; k < patches.size(); ++k) {
    Patch& p = *patches[k];
    first.push_back(capture(p));
    p.h = start[k].h;
    p.hu = start[k].hu;
    p.hv = start[k].hv;
    p.psi1 = start[k].psi1;
    p.psi2 = start[k].psi2;
    p.mass_fx = start[k].fx;
    p.mass_fy = start[k].fy;
  }
  split_step(patches, dt, params, exchange, false);
  auto mean = [](Grid2D<double>& g, const Grid2D<double>& a) {
    auto& v = g.raw();
    const auto& w = a.raw();
    for (std::size_t m = 0; m < v.size(); ++m) v[m] = 0.5 * (w[m] + v[m]);
  };
  for (std::size_t k = 0; k < patches.size(); ++k) {
    Patch& p = *patches[k];
    const SweptFields& a = first[k];
    mean(p.h, a.h);
    mean(p.hu, a.hu);
    mean(p.hv, a.hv);
    mean(p.psi1, a.psi1);
    mean(p.psi2, a.psi2);
    mean(p.mass_fx, a.fx);
    mean(p.mass_fy, a.fy);
    swe::finalize_dry(p, params);
  }
}

linalg::SolverStats sgn_step(const std::vector<Patch*>& patches, const Domain& domain, double dt,
                             const SgnParams& params, const SolveOptions& opts, PrecondCache& cache,
                             const LevelHooks& hooks, swe::SweepOrder order, bool swe_only) {
  linalg::SolverStats stats;
  stats.converged = true;
  if (hooks.fill_ghosts) hooks.fill_ghosts();
  if (!swe_only) {
    enumerate_cells(patches, domain);
    std::vector<SgnFields> fields;
    fields.reserve(patches.size());
    for (const Patch* p : patches) fields.push_back(compute_phi_w(*p, params));
    stats = solve_dispersive(patches, fields, domain, params, opts, cache);
    for (std::size_t k = 0; k < patches.size(); ++k) source_update(*patches[k], fields[k], dt, params);
    if (hooks.exchange) hooks.exchange();
  }
  level_swe_step(patches, domain, dt, swe::SweParams{params.g, params.dry_tolerance}, hooks.exchange, order);
  return stats;
}

}  // namespace bouss::sgn
