#include <doctest.h>

#include <cmath>
#include <map>

#include "bouss/amr/amr.hpp"
#include "bouss/amr/driver.hpp"
#include "bouss/core/error.hpp"

using namespace bouss;
using namespace bouss::amr;

namespace {

SimConfig hump_config(int levels, Mode mode = Mode::sgn_subcycled) {
  SimConfig cfg;
  cfg.x_upper = cfg.y_upper = 20000;
  cfg.mx = cfg.my = 20;
  cfg.max_levels = levels;
  cfg.refine_ratio_space.assign(std::size_t(std::max(levels - 1, 0)), 2);
  cfg.refine_ratio_time = cfg.refine_ratio_space;
  cfg.flag_tolerance = 0.01;
  cfg.flag_buffer = 1;
  cfg.regrid_interval = 2;
  cfg.max_patch_size = 32;
  cfg.mode = mode;
  cfg.output_dir.clear();
  return cfg;
}

InitialCondition hump(double x0 = 10000, double y0 = 10000) {
  return [=](double x, double y) {
    return InitialState{0.5 * std::exp(-(std::pow(x - x0, 2) + std::pow(y - y0, 2)) / std::pow(2000.0, 2)), 0, 0};
  };
}

long flagged(const FlagField& F) {
  long n = 0;
  for (unsigned char f : F.flag) n += f;
  return n;
}

double max_abs(const Grid2D<double>& g, const Patch& p) {
  double m = 0;
  for (int j = 0; j < p.ny(); ++j)
    for (int i = 0; i < p.nx(); ++i) m = std::max(m, std::abs(g(i, j)));
  return m;
}

}  // namespace

TEST_CASE("initial hierarchy is properly nested and covers the flags") {
  const Hierarchy H = build_hierarchy(hump_config(3), flat_bottom(200), hump());
  REQUIRE(H.finest() == 3);
  for (int l = 2; l <= 3; ++l) {
    CHECK_NOTHROW(check_nesting(H, l));
    CHECK(!H.level(l).patches.empty());
    for (const Patch& p : H.level(l).patches) {
      CHECK(p.nx() <= 32);
      CHECK(p.ny() <= 32);
    }
  }
  for (int l = 1; l <= 2; ++l) {
    const FlagField F = flag_cells(H, l);
    CHECK(flagged(F) > 0);
    const int r = H.cfg.ratio_space(l);
    for (int j = F.box.j_lo; j <= F.box.j_hi; ++j)
      for (int i = F.box.i_lo; i <= F.box.i_hi; ++i) {
        if (!F.at(F.flag, i, j)) continue;
        bool covered = false;
        for (const Patch& p : H.level(l + 1).patches) covered = covered || p.box.contains(i * r, j * r);
        CHECK(covered);
      }
  }
}

TEST_CASE("improper nesting is detected") {
  Hierarchy H = build_hierarchy(hump_config(3), flat_bottom(200), hump());
  Patch& p = H.level(3).patches.front();
  p.box = p.box.grow(8);
  CHECK_THROWS_AS(check_nesting(H, 3), Error);
}

TEST_CASE("clustering covers flags with efficient, bounded, allowed boxes") {
  FlagField F;
  F.box = {0, 99, 0, 79};
  F.level = 1;
  F.flag.assign(std::size_t(F.box.cells()), 0);
  F.allowed.assign(std::size_t(F.box.cells()), 1);
  for (int j = 0; j < 80; ++j)
    for (int i = 0; i < 100; ++i) {
      const bool disk1 = std::hypot(i - 25, j - 25) < 12;
      const bool disk2 = std::hypot(i - 70, j - 55) < 18;
      F.at(F.flag, i, j) = disk1 || disk2;
      if (i == 50) F.at(F.allowed, i, j) = 0;
    }
  const auto boxes = cluster_flags(F, 16);
  REQUIRE(!boxes.empty());
  std::vector<int> cover(std::size_t(F.box.cells()), 0);
  for (const Box& b : boxes) {
    CHECK(b.nx() <= 16);
    CHECK(b.ny() <= 16);
    long n = 0;
    for (int j = b.j_lo; j <= b.j_hi; ++j)
      for (int i = b.i_lo; i <= b.i_hi; ++i) {
        n += F.at(F.flag, i, j);
        CHECK(F.at(F.allowed, i, j) == 1);
        ++cover[std::size_t(j * 100 + i)];
      }
    CHECK(double(n) / double(b.cells()) >= kClusterEfficiency);
  }
  for (int j = 0; j < 80; ++j)
    for (int i = 0; i < 100; ++i) {
      CHECK(cover[std::size_t(j * 100 + i)] <= 1);
      if (F.at(F.flag, i, j)) CHECK(cover[std::size_t(j * 100 + i)] == 1);
    }
}

TEST_CASE("coarse cells under a finer level hold the average of their children") {
  Hierarchy H = build_hierarchy(hump_config(2), flat_bottom(200), hump());
  for (Patch& p : H.level(2).patches)
    for (int j = 0; j < p.ny(); ++j)
      for (int i = 0; i < p.nx(); ++i) {
        const int gi = p.box.i_lo + i, gj = p.box.j_lo + j;
        p.h(i, j) = 200 + 0.01 * ((gi * 7 + gj * 13) % 11);
        p.hu(i, j) = 0.1 * ((gi * 3 + gj) % 5);
        p.hv(i, j) = -0.2 * ((gi + 5 * gj) % 3);
      }
  update_coarse(H, 1);
  const Patch& c = H.level(1).patches.front();
  long checked = 0;
  for (int J = 0; J < c.ny(); ++J)
    for (int I = 0; I < c.nx(); ++I) {
      double h = 0, hu = 0, hv = 0;
      int n = 0;
      for (const Patch& p : H.level(2).patches)
        for (int dj = 0; dj < 2; ++dj)
          for (int di = 0; di < 2; ++di) {
            const int gi = 2 * I + di, gj = 2 * J + dj;
            if (!p.box.contains(gi, gj)) continue;
            h += p.h(gi - p.box.i_lo, gj - p.box.j_lo);
            hu += p.hu(gi - p.box.i_lo, gj - p.box.j_lo);
            hv += p.hv(gi - p.box.i_lo, gj - p.box.j_lo);
            ++n;
          }
      if (n == 0) continue;
      REQUIRE(n == 4);
      CHECK(c.h(I, J) == doctest::Approx(h / 4).epsilon(1e-15));
      CHECK(std::abs(c.hu(I, J) - hu / 4) <= 1e-15);
      CHECK(std::abs(c.hv(I, J) - hv / 4) <= 1e-15);
      ++checked;
    }
  CHECK(checked > 0);
}

TEST_CASE("coarse-to-fine operators reproduce linear data") {
  Hierarchy H = build_hierarchy(hump_config(2), flat_bottom(200), hump());
  Patch& c = H.level(1).patches.front();
  auto eta = [](double x, double y) { return 0.3 + 2e-5 * x - 3e-5 * y; };
  auto mom = [](double x, double y) { return 1.0 + 1e-4 * x + 2e-4 * y; };
  for (int j = -c.ng; j < c.ny() + c.ng; ++j)
    for (int i = -c.ng; i < c.nx() + c.ng; ++i) {
      c.h(i, j) = eta(c.xc(i), c.yc(j)) - c.B(i, j);
      c.hu(i, j) = mom(c.xc(i), c.yc(j));
      c.hv(i, j) = -mom(c.xc(i), c.yc(j));
    }
  const double dx = H.domain.dx(2);
  for (int j = 10; j < 30; ++j)
    for (int i = 10; i < 30; ++i) {
      const double x = (i + 0.5) * dx, y = (j + 0.5) * dx;
      const CellState a = interpolate_from_coarse(H, H.level(1).patches, 2, i, j, -200);
      CHECK(a.h - 200 == doctest::Approx(eta(x, y)).epsilon(1e-12));
      CHECK(a.hu == doctest::Approx(mom(x, y)).epsilon(1e-12));
      const CellState b = conservative_from_coarse(H, H.level(1).patches, 2, i, j, -200);
      CHECK(b.h - 200 == doctest::Approx(eta(x, y)).epsilon(1e-12));
      CHECK(b.hv == doctest::Approx(-mom(x, y)).epsilon(1e-12));
    }
  // Children of one parent average back to it for non-linear data too.
  c.h(8, 8) += 0.7;
  c.hu(9, 8) -= 0.4;
  for (int I = 7; I <= 10; ++I) {
    double h = 0, hu = 0;
    for (int dj = 0; dj < 2; ++dj)
      for (int di = 0; di < 2; ++di) {
        const CellState s = conservative_from_coarse(H, H.level(1).patches, 2, 2 * I + di, 16 + dj, -200);
        h += s.h;
        hu += s.hu;
      }
    CHECK(h / 4 == doctest::Approx(c.h(I, 8)).epsilon(1e-14));
    CHECK(hu / 4 == doctest::Approx(c.hu(I, 8)).epsilon(1e-14));
  }
}

TEST_CASE("wall ghosts mirror psi with the normal component reversed") {
  Hierarchy H = build_hierarchy(hump_config(1), flat_bottom(200), hump(3000, 4000));
  StepCounters counts;
  coarse_step(H, stable_dt(H), counts);
  exchange(H, 1);
  const Patch& p = H.level(1).patches.front();
  REQUIRE(max_abs(p.psi1, p) > 0);
  for (int j = 0; j < p.ny(); ++j) {
    CHECK(p.psi1(-1, j) == -p.psi1(0, j));
    CHECK(p.psi2(-1, j) == p.psi2(0, j));
  }
  for (int i = 0; i < p.nx(); ++i) {
    CHECK(p.psi2(i, -1) == -p.psi2(i, 0));
    CHECK(p.psi1(i, -1) == p.psi1(i, 0));
  }
}

TEST_CASE("solve counts per coarse step follow the time ratios") {
  Hierarchy H = build_hierarchy(hump_config(3), flat_bottom(200), hump());
  for (int n = 0; n < 3; ++n) {
    StepCounters counts;
    coarse_step(H, stable_dt(H), counts);
    REQUIRE(counts.solves.size() == 3);
    CHECK(counts.solves[0] == 2);
    CHECK(counts.solves[1] == 4);
    CHECK(counts.solves[2] == 4);
  }
  SimConfig cfg = hump_config(2, Mode::sgn_composite);
  Hierarchy C = build_hierarchy(cfg, flat_bottom(200), hump());
  StepCounters counts;
  coarse_step(C, stable_dt(C), counts);
  CHECK(counts.solves[0] == 1);
  CHECK(C.level(2).time == doctest::Approx(C.level(1).time));
}

TEST_CASE("mass is conserved across levels") {
  for (Mode mode : {Mode::sgn_subcycled, Mode::sgn_composite, Mode::swe}) {
    Hierarchy H = build_hierarchy(hump_config(3, mode), flat_bottom(200), hump(8000, 11000));
    const double m0 = composite_mass(H);
    for (int n = 0; n < 12; ++n) {
      StepCounters counts;
      coarse_step(H, stable_dt(H), counts);
    }
    INFO("mode " << to_string(mode));
    CHECK(std::abs(composite_mass(H) - m0) <= 1e-12 * m0);
  }
}

TEST_CASE("single-level composite system equals the level system") {
  const SimConfig cfg = hump_config(1, Mode::sgn_composite);
  Hierarchy H = build_hierarchy(cfg, flat_bottom(200), [](double x, double y) {
    return InitialState{0.4 * std::exp(-(std::pow(x - 9000, 2) + std::pow(y - 12000, 2)) / 4e6), 0.2 * std::sin(x / 3000),
                        0.1 * std::cos(y / 2000)};
  });
  fill_ghosts(H, 1, 0.0);
  const sgn::SgnParams params = sgn::sgn_params(cfg);
  std::vector<std::vector<sgn::SgnFields>> fields(1);
  for (const Patch& p : H.level(1).patches) fields[0].push_back(sgn::compute_phi_w(p, params));
  const CompositeSystem C = assemble_composite_system(H, fields);
  auto ptrs = H.patch_ptrs(1);
  sgn::enumerate_cells(ptrs, H.domain);
  const sgn::LevelSystem L = sgn::assemble_level_system(ptrs, fields[0], H.domain, params);
  REQUIRE(C.A.n_rows == L.A.n_rows);

  // Map composite ids onto level ids through the cell keys.
  const Patch& p = H.level(1).patches.front();
  std::vector<int> to_level(C.keys.size());
  for (std::size_t id = 0; id < C.keys.size(); ++id) {
    REQUIRE(C.kinds[id] == UnknownKind::exposed);
    to_level[id] = p.eqn_id(C.keys[id].i - p.box.i_lo, C.keys[id].j - p.box.j_lo);
  }
  auto comp = [&](int c) { return 2 * to_level[std::size_t(c / 2)] + c % 2; };
  auto entries = [](const linalg::CsrMatrix& A, int r) {
    std::map<int, double> m;
    for (auto k = A.row_offsets[std::size_t(r)]; k < A.row_offsets[std::size_t(r) + 1]; ++k)
      m[A.col_indices[std::size_t(k)]] += A.values[std::size_t(k)];
    return m;
  };
  for (int r = 0; r < C.A.n_rows; ++r) {
    const int lr = comp(r);
    auto a = entries(C.A, r);
    auto b = entries(L.A, lr);
    std::map<int, double> mapped;
    for (auto [c, v] : a) mapped[comp(c)] += v;
    for (auto [c, v] : mapped) CHECK(std::abs(v - b[c]) <= 1e-12 * std::max(1.0, std::abs(v)));
    for (auto [c, v] : b) CHECK(std::abs(v - mapped[c]) <= 1e-12 * std::max(1.0, std::abs(v)));
    CHECK(std::abs(C.rhs[std::size_t(r)] - L.rhs[std::size_t(lr)]) <= 1e-14);
  }
}

TEST_CASE("radially symmetric data on a walled quadrant stays symmetric") {
  SimConfig cfg = hump_config(3);
  Hierarchy final;
  cfg.output_times = {1e9};
  cfg.max_steps = 100;
  run_driver(cfg, flat_bottom(200), hump(0, 0), {}, &final);
  const double dx = final.domain.dx(3);
  double worst = 0, peak = 0;
  for (int i = 0; i < 80; ++i) {
    const double s = (i + 0.5) * dx, c = 0.5 * dx;
    const PointSample a = sample_point(final, s, c), b = sample_point(final, c, s);
    CHECK(a.level == b.level);
    worst = std::max(worst, std::abs(a.eta - b.eta));
    peak = std::max(peak, std::abs(a.eta));
  }
  INFO("peak " << peak);
  CHECK(peak > 1e-3);
  CHECK(worst <= 1e-8);
}

TEST_CASE("lake at rest with refinement regions and dry land") {
  SimConfig cfg = hump_config(3);
  cfg.x_upper = 12000;
  cfg.mx = 12;
  cfg.regions.push_back({3, 3, 6000, 11000, 4000, 12000});
  cfg.output_times = {1e9};
  cfg.max_steps = 20;
  for (Mode mode : {Mode::sgn_subcycled, Mode::sgn_composite}) {
    cfg.mode = mode;
    const RunSummary s = run_driver(
        cfg, [](double x, double y) { return -200 + 0.02 * x + 20 * std::sin(y / 1000); },
        [](double, double) { return lake_at_rest_state(0.0); });
    CHECK(s.coarse_steps == 20);
    CHECK(s.max_abs_eta <= 1e-12);
    CHECK(s.max_abs_psi <= 1e-12);
  }
}
