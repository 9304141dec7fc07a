#include <deque>
#include <unordered_map>

#include "bouss/amr/amr.hpp"
#include "bouss/core/error.hpp"
#include "bouss/swe/swe.hpp"

namespace bouss::amr {

namespace {

struct Builder {
  const Hierarchy& H;
  const std::vector<std::vector<sgn::SgnFields>>& fields;
  CompositeSystem sys;
  std::unordered_map<std::int64_t, int> index;
  std::deque<int> work;

  static std::int64_t code(int l, int i, int j) {
    return (std::int64_t(l) << 48) | (std::int64_t(i + (1 << 23)) << 24) | std::int64_t(j + (1 << 23));
  }

  // (patch index, covered by level+1) for a cell inside some patch of level l; -1 if none.
  int owner(int l, int i, int j) const {
    const auto& ps = H.level(l).patches;
    for (std::size_t k = 0; k < ps.size(); ++k)
      if (ps[k].box.contains(i, j)) return int(k);
    return -1;
  }
  bool covered(int l, int i, int j) const {
    if (l >= H.finest()) return false;
    const int r = H.domain.ratios.at(std::size_t(l - 1));
    for (const Patch& f : H.level(l + 1).patches)
      if (f.box.contains(i * r, j * r)) return true;
    return false;
  }

  int add(int l, int i, int j, UnknownKind kind) {
    const int id = int(sys.keys.size());
    index.emplace(code(l, i, j), id);
    sys.keys.push_back({l, i, j});
    sys.kinds.push_back(kind);
    work.push_back(id);
    return id;
  }

  struct Ref {
    int id;
    double sign;
  };

  Ref resolve(int l, int i, int j, int comp) {
    double sign = 1.0;
    if (!H.domain.box(l).contains(i, j)) {
      const sgn::Folded f = sgn::fold_target(H.domain, l, i, j, comp);
      i = f.i;
      j = f.j;
      sign = f.sign;
    }
    auto it = index.find(code(l, i, j));
    if (it != index.end()) return {it->second, sign};
    if (owner(l, i, j) >= 0) return {add(l, i, j, covered(l, i, j) ? UnknownKind::hidden : UnknownKind::exposed), sign};
    if (l == 1) throw Error("composite system: level 1 cell outside every patch");
    return {add(l, i, j, UnknownKind::ghost), sign};
  }

  std::vector<linalg::Triplet> trip;
  std::vector<double> rhs;

  void row_entry(int row, int l, int i, int j, int comp, double c) {
    const Ref r = resolve(l, i, j, comp);
    trip.push_back({row, 2 * r.id + comp, c * r.sign});
  }

  void build() {
    // Exposed cells first, patch by patch in row-major order, so that a single
    // level reproduces the level system's numbering.
    for (int l = 1; l <= H.finest(); ++l)
      for (const Patch& p : H.level(l).patches)
        for (int j = 0; j < p.ny(); ++j)
          for (int i = 0; i < p.nx(); ++i) {
            const int gi = p.box.i_lo + i, gj = p.box.j_lo + j;
            if (!covered(l, gi, gj)) add(l, gi, gj, UnknownKind::exposed);
          }
    const sgn::SgnParams params = sgn::sgn_params(H.cfg);
    std::vector<sgn::StencilEntry> st;
    while (!work.empty()) {
      const int id = work.front();
      work.pop_front();
      const CompositeKey key = sys.keys[std::size_t(id)];
      const int l = key.level;
      if (rhs.size() < 2 * sys.keys.size()) rhs.resize(2 * sys.keys.size() + 64, 0.0);
      switch (sys.kinds[std::size_t(id)]) {
        case UnknownKind::exposed: {
          const int k = owner(l, key.i, key.j);
          const Patch& p = H.level(l).patches[std::size_t(k)];
          const sgn::SgnFields& f = fields[std::size_t(l - 1)][std::size_t(k)];
          const int i = key.i - p.box.i_lo, j = key.j - p.box.j_lo;
          if (f.mask(i, j)) {
            trip.push_back({2 * id, 2 * id, 1.0});
            trip.push_back({2 * id + 1, 2 * id + 1, 1.0});
            mark_masked(id);
            break;
          }
          const sgn::Rhs r = sgn::assemble_rhs(p, f, i, j, params);
          rhs[std::size_t(2 * id)] = r.r1;
          rhs[std::size_t(2 * id + 1)] = r.r2;
          for (int row = 0; row < 2; ++row) {
            sgn::operator_stencil(p, f, i, j, row, params, st);
            for (const sgn::StencilEntry& e : st) row_entry(2 * id + row, l, key.i + e.di, key.j + e.dj, e.comp, e.coeff);
          }
          break;
        }
        case UnknownKind::hidden: {
          const int r = H.domain.ratios.at(std::size_t(l - 1));
          const double w = -1.0 / (r * r);
          for (int comp = 0; comp < 2; ++comp) {
            trip.push_back({2 * id + comp, 2 * id + comp, 1.0});
            for (int cj = 0; cj < r; ++cj)
              for (int ci = 0; ci < r; ++ci) row_entry(2 * id + comp, l + 1, key.i * r + ci, key.j * r + cj, comp, w);
          }
          break;
        }
        case UnknownKind::ghost: {
          const int r = H.domain.ratios.at(std::size_t(l - 2));
          const int I = floor_div(key.i, r), J = floor_div(key.j, r);
          const double ox = (key.i - I * r + 0.5) / r - 0.5, oy = (key.j - J * r + 0.5) / r - 0.5;
          for (int comp = 0; comp < 2; ++comp) {
            const int row = 2 * id + comp;
            trip.push_back({row, row, 1.0});
            row_entry(row, l - 1, I, J, comp, -1.0);
            if (ox != 0.0) {
              row_entry(row, l - 1, I + 1, J, comp, -0.5 * ox);
              row_entry(row, l - 1, I - 1, J, comp, 0.5 * ox);
            }
            if (oy != 0.0) {
              row_entry(row, l - 1, I, J + 1, comp, -0.5 * oy);
              row_entry(row, l - 1, I, J - 1, comp, 0.5 * oy);
            }
          }
          break;
        }
      }
    }
    const int n = int(sys.keys.size());
    rhs.resize(std::size_t(2 * n));
    sys.rhs = rhs;
    sys.masked.resize(std::size_t(n), 0);
    sys.x0.assign(std::size_t(2 * n), 0.0);
    for (int id = 0; id < n; ++id) {
      const CompositeKey& key = sys.keys[std::size_t(id)];
      const int k = owner(key.level, key.i, key.j);
      if (k < 0 || sys.masked[std::size_t(id)]) continue;
      const Patch& p = H.level(key.level).patches[std::size_t(k)];
      sys.x0[std::size_t(2 * id)] = p.psi1(key.i - p.box.i_lo, key.j - p.box.j_lo);
      sys.x0[std::size_t(2 * id + 1)] = p.psi2(key.i - p.box.i_lo, key.j - p.box.j_lo);
    }
    sys.A = linalg::csr_from_entries(2 * n, trip);
  }

  void mark_masked(int id) {
    if (sys.masked.size() <= std::size_t(id)) sys.masked.resize(std::size_t(id) + 64, 0);
    sys.masked[std::size_t(id)] = 1;
  }
};

}  // namespace

CompositeSystem assemble_composite_system(const Hierarchy& H, const std::vector<std::vector<sgn::SgnFields>>& fields) {
  Builder b{H, fields, {}, {}, {}, {}, {}};
  b.build();
  return std::move(b.sys);
}

linalg::SolverStats composite_solve(Hierarchy& H, std::vector<std::vector<sgn::SgnFields>>& fields) {
  const sgn::SgnParams params = sgn::sgn_params(H.cfg);
  fields.assign(std::size_t(H.finest()), {});
  for (int l = 1; l <= H.finest(); ++l)
    for (const Patch& p : H.level(l).patches) fields[std::size_t(l - 1)].push_back(sgn::compute_phi_w(p, params));
  CompositeSystem sys = assemble_composite_system(H, fields);
  const sgn::SolveOptions opts = sgn::solve_options(H.cfg);
  sgn::PrecondCache& cache = H.level(1).cache;
  bool reused = true;
  if (!cache.M || cache.M->size() != sys.A.n_rows || cache.uses >= opts.reuse_steps) {
    cache.M = linalg::make_preconditioner(sys.A, opts.precond, 2);
    cache.uses = 0;
    reused = false;
  }
  ++cache.uses;
  linalg::SolveResult res;
  try {
    res = linalg::solve_krylov(sys.A, sys.rhs, sys.x0, opts.rtol, opts.maxit, *cache.M, opts.krylov);
  } catch (const linalg::KrylovFailure& e) {
    throw Error("composite solve at t=" + std::to_string(H.level(1).time) + ": " + e.what());
  }
  res.stats.preconditioner_reused = reused;
  for (std::size_t id = 0; id < sys.keys.size(); ++id) {
    if (sys.kinds[id] == UnknownKind::ghost) continue;
    const CompositeKey& key = sys.keys[id];
    for (Patch& p : H.level(key.level).patches)
      if (p.box.contains(key.i, key.j)) {
        const int i = key.i - p.box.i_lo, j = key.j - p.box.j_lo;
        const bool m = sys.masked[id];
        p.psi1(i, j) = m ? 0.0 : res.x[2 * id];
        p.psi2(i, j) = m ? 0.0 : res.x[2 * id + 1];
        break;
      }
  }
  return res.stats;
}

void advance_composite(Hierarchy& H, double dt, StepCounters& counts) {
  const SimConfig& cfg = H.cfg;
  if (H.level(1).steps > 0 && H.level(1).steps % cfg.regrid_interval == 0 && cfg.max_levels > 1) {
    regrid(H, 1);
    H.level(1).cache.invalidate();
  }
  for (Level& L : H.levels) {
    L.snap_old.clear();
    L.snap_new.clear();
  }
  for (int l = 1; l <= H.finest(); ++l) fill_ghosts(H, l, 0.0);

  const sgn::SgnParams params = sgn::sgn_params(cfg);
  std::vector<std::vector<sgn::SgnFields>> fields;
  const linalg::SolverStats st = composite_solve(H, fields);
  ++H.level(1).solves;
  H.level(1).krylov_iterations += st.iterations;
  ++counts.solves[0];
  for (int l = 1; l <= H.finest(); ++l) {
    exchange(H, l);
    auto& ps = H.level(l).patches;
    for (std::size_t k = 0; k < ps.size(); ++k) sgn::source_update(ps[k], fields[std::size_t(l - 1)][k], dt, params);
    exchange(H, l);
  }

  const swe::SweParams sp{cfg.g, cfg.dry_tolerance};
  std::vector<StepFlux> flux(std::size_t(H.finest()));
  for (int l = 1; l <= H.finest(); ++l) {
    Level& L = H.level(l);
    if (l > 1) fill_ghosts(H, l, 0.0);
    if (l < H.finest()) L.snap_old = L.patches;
    for (Patch& p : L.patches) p.clear_fluxes();
    sgn::level_swe_step(H.patch_ptrs(l), H.domain, dt, sp, [&] { exchange(H, l); }, swe::SweepOrder::averaged);
    for (Patch& p : L.patches) {
      flux[std::size_t(l - 1)].fx.push_back(p.mass_fx);
      flux[std::size_t(l - 1)].fy.push_back(p.mass_fy);
    }
  }
  for (int l = H.finest() - 1; l >= 1; --l) {
    update_coarse(H, l);
    reflux(H, l, flux[std::size_t(l - 1)]);
  }
  for (Level& L : H.levels) {
    L.time += dt;
    ++L.steps;
  }
}

}  // namespace bouss::amr
