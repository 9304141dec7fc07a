#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bouss/analysis/analysis.hpp"
#include "bouss/core/error.hpp"
#include "bouss/radial/radial.hpp"

using namespace bouss;
using namespace bouss::radial;

namespace {

constexpr double pi = std::numbers::pi;

auto flat(double depth) {
  return [depth](double) { return -depth; };
}

auto rest(double eta = 0.0) {
  return [eta](double) { return std::pair{eta, 0.0}; };
}

// Dispersive part of the right-hand side (g = 0) for eta = 0.3 cos(kr),
// B = -200 + 30 sin(kr/2), u = 2 sin(kr + 1/3), k = 2 pi / 5000; symbolic oracle.
double rhs_exact(double r) {
  const double M_PI_ = pi;
  return 2.1333333333333333e-13 *
         (3488.2061265337298 * std::pow(r, 3) *
              (-(-3.0 * std::sin((1.0 / 5000.0) * M_PI_ * r + 1.0 / 3.0) +
                 5.0 * std::sin((3.0 / 5000.0) * M_PI_ * r + 1.0 / 3.0)) *
                   (-300.0 * std::sin((1.0 / 5000.0) * M_PI_ * r) + 3.0 * std::cos((1.0 / 2500.0) * M_PI_ * r) +
                    2000.0) +
               24.0 * std::sin((1.0 / 5000.0) * M_PI_ * r) * std::sin((1.0 / 2500.0) * M_PI_ * r) *
                   std::sin((1.0 / 2500.0) * M_PI_ * r + 1.0 / 3.0)) *
              std::sin((1.0 / 2500.0) * M_PI_ * r + 1.0 / 3.0) -
          8.0 *
              (28.274333882308139 * r *
                   (std::sin((1.0 / 2500.0) * M_PI_ * r) + 25.0 * std::cos((1.0 / 5000.0) * M_PI_ * r)) *
                   (9.8696044010893586 * std::pow(r, 2) *
                        std::pow(std::cos((1.0 / 2500.0) * M_PI_ * r + 1.0 / 3.0), 2) +
                    3926.9908169872415 * r * std::sin((1.0 / 1250.0) * M_PI_ * r + 2.0 / 3.0) +
                    6250000.0 * std::pow(std::sin((1.0 / 2500.0) * M_PI_ * r + 1.0 / 3.0), 2)) +
               (-300.0 * std::sin((1.0 / 5000.0) * M_PI_ * r) + 3.0 * std::cos((1.0 / 2500.0) * M_PI_ * r) +
                2000.0) *
                   (31.00627668029982 * std::pow(r, 3) * std::sin((1.0 / 1250.0) * M_PI_ * r + 2.0 / 3.0) -
                    24674.011002723397 * std::pow(r, 2) * std::cos((1.0 / 1250.0) * M_PI_ * r + 2.0 / 3.0) -
                    9817477.0424681039 * r * std::sin((1.0 / 1250.0) * M_PI_ * r + 2.0 / 3.0) -
                    15625000000.0 * std::cos((1.0 / 1250.0) * M_PI_ * r + 2.0 / 3.0) + 15625000000.0)) *
              (-300.0 * std::sin((1.0 / 5000.0) * M_PI_ * r) + 3.0 * std::cos((1.0 / 2500.0) * M_PI_ * r) +
               2000.0)) /
         std::pow(r, 3);
}

// Smoothly stretched faces on [a, b].
std::vector<double> stretched_faces(double a, double b, int n) {
  std::vector<double> f(std::size_t(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = double(i) / n;
    f[std::size_t(i)] = a + (b - a) * (t + 0.1 * std::sin(2 * pi * t));
  }
  return f;
}

double max_abs_eta(const RadialState& s) {
  double m = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s.h[std::size_t(i)] > 1e-3) m = std::max(m, std::abs(s.h[std::size_t(i)] + s.B[std::size_t(i)]));
  return m;
}

}  // namespace

TEST_CASE("constant-depth operator row") {
  const RadialParams p;
  const double H = 100, dr = 100;
  const RadialState s = make_state(uniform_faces(0, 5000, 50), flat(H), rest());
  const int i = 20;
  const double r = s.r[i];
  CHECK(r == doctest::Approx(2050));
  const OperatorRow row = radial_operator_row(s, i, Geometry::radial, p);
  const double a = p.alpha;
  CHECK(row.diag == doctest::Approx(1 + 2 * a * H * H / (3 * dr * dr) + a * H * H / (3 * r * r)).epsilon(1e-12));
  CHECK(row.lower == doctest::Approx(-a * H * H / (3 * dr * dr) + a * H * H / (6 * r * dr)).epsilon(1e-12));
  CHECK(row.upper == doctest::Approx(-a * H * H / (3 * dr * dr) - a * H * H / (6 * r * dr)).epsilon(1e-12));

  const OperatorRow plane = radial_operator_row(s, i, Geometry::plane, p);
  CHECK(plane.diag == doctest::Approx(1 + 2 * a * H * H / (3 * dr * dr)).epsilon(1e-12));
  CHECK(plane.lower == doctest::Approx(-a * H * H / (3 * dr * dr)).epsilon(1e-12));
  CHECK(plane.upper == doctest::Approx(plane.lower).epsilon(1e-12));
}

TEST_CASE("radial row tends to the plane row as r grows") {
  const RadialParams p;
  auto gap = [&](double r0) {
    const RadialState s = make_state(uniform_faces(r0, r0 + 5000, 50), flat(100), rest());
    const OperatorRow a = radial_operator_row(s, 25, Geometry::radial, p);
    const OperatorRow b = radial_operator_row(s, 25, Geometry::plane, p);
    return std::max({std::abs(a.lower - b.lower), std::abs(a.diag - b.diag), std::abs(a.upper - b.upper)});
  };
  const double g5 = gap(1e5), g6 = gap(1e6);
  CHECK(g6 < 2.5e-5);
  CHECK(g5 / g6 == doctest::Approx(10).epsilon(0.05));
}

TEST_CASE("dry and vanishing depth give identity rows") {
  const RadialParams p;
  RadialState s = make_state(uniform_faces(0, 1000, 10), flat(2e-3), rest());
  const OperatorRow thin = radial_operator_row(s, 5, Geometry::radial, p);
  CHECK(std::abs(thin.diag - 1) < 1e-9);
  CHECK(std::abs(thin.lower) < 1e-9);
  CHECK(std::abs(thin.upper) < 1e-9);
  s.h[5] = 0;
  const OperatorRow dry = radial_operator_row(s, 5, Geometry::radial, p);
  CHECK(dry.diag == 1.0);
  CHECK(dry.lower == 0.0);
  CHECK(dry.upper == 0.0);
}

TEST_CASE("still water has a zero right-hand side") {
  const RadialParams p;
  auto shelf = [](double r) { return r < 20000 ? -2000.0 : -2000.0 + 0.1 * (r - 20000); };
  const RadialState s = make_state(graded_faces(50000, [&](double r) { return -shelf(r); }, 500, 2000, 50), shelf,
                                   rest());
  for (Geometry g : {Geometry::radial, Geometry::plane})
    for (double b : radial_rhs(s, g, p)) CHECK(b == 0.0);
}

TEST_CASE("linear velocity u = c r gives phi = 3 c^2") {
  RadialParams p;
  const double c = 1e-4, slope = 1e-4, H = 100;
  for (auto faces : {uniform_faces(0, 10000, 100), stretched_faces(0, 10000, 100)}) {
    const RadialState s = make_state(faces, flat(H), [&](double r) { return std::pair{slope * r, c * r}; });
    const auto b = radial_rhs(s, Geometry::radial, p);
    for (int i = 1; i < s.size() - 3; ++i) {
      const double h = s.h[std::size_t(i)];
      const double expect = p.g / p.alpha * slope + 2 * h * 3 * c * c * slope;
      CHECK(b[std::size_t(i)] == doctest::Approx(expect).epsilon(1e-9));
    }
  }
}

TEST_CASE("right-hand side converges at second order on stretched grids") {
  RadialParams p;
  p.g = 0;
  const double k = 2 * pi / 5000;
  auto bottom = [&](double r) { return -200 + 30 * std::sin(k * r / 2); };
  auto init = [&](double r) { return std::pair{0.3 * std::cos(k * r), 2 * std::sin(k * r + 1.0 / 3.0)}; };
  double prev = 0;
  for (int n : {100, 200, 400}) {
    const RadialState s = make_state(stretched_faces(2000, 22000, n), bottom, init);
    const auto b = radial_rhs(s, Geometry::radial, p);
    double err = 0;
    for (int i = 3; i < n - 3; ++i) err = std::max(err, std::abs(b[std::size_t(i)] - rhs_exact(s.r[std::size_t(i)])));
    if (prev > 0) CHECK(std::log2(prev / err) >= 1.8);
    prev = err;
  }
}

TEST_CASE("switch mask") {
  RadialParams p;
  auto bottom = [](double r) { return r < 5000 ? -100.0 : -100.0 + 0.05 * (r - 5000); };
  const RadialState s = make_state(uniform_faces(0, 8000, 80), bottom, rest());
  const auto m = radial_mask(s, Geometry::radial, p);
  for (int i = 0; i < s.size(); ++i) {
    bool shallow = false;
    for (int q = std::max(i - 1, 0); q <= std::min(i + 1, s.size() - 1); ++q)
      shallow = shallow || -s.B[std::size_t(q)] < p.h_switch;
    if (i == s.size() - 1) shallow = shallow || -s.B[std::size_t(i)] < p.h_switch;
    CHECK(bool(m[std::size_t(i)]) == shallow);
  }
}

TEST_CASE("psi solves the folded tridiagonal system") {
  const RadialParams p;
  const double k = 2 * pi / 5000;
  auto bottom = [&](double r) { return -200 + 30 * std::sin(k * r / 2); };
  auto init = [&](double r) { return std::pair{0.3 * std::exp(-std::pow((r - 6000) / 1500, 2)), 0.4 * std::sin(k * r)}; };
  for (OuterBoundary ob : {OuterBoundary::extrapolation, OuterBoundary::wall}) {
    RadialParams q = p;
    q.outer = ob;
    RadialState s = make_state(stretched_faces(0, 20000, 120), bottom, init);
    solve_psi(s, Geometry::radial, q);
    const auto b = radial_rhs(s, Geometry::radial, q);
    const int n = s.size();
    double scale = 0;
    for (double v : b) scale = std::max(scale, std::abs(v));
    REQUIRE(scale > 0);
    for (int i = 0; i < n; ++i) {
      const OperatorRow row = radial_operator_row(s, i, Geometry::radial, q);
      const double left = i == 0 ? -s.psi[0] : s.psi[std::size_t(i - 1)];
      const double right = i == n - 1 ? (ob == OuterBoundary::wall ? -1.0 : 1.0) * s.psi[std::size_t(n - 1)]
                                      : s.psi[std::size_t(i + 1)];
      const double res = row.lower * left + row.diag * s.psi[std::size_t(i)] + row.upper * right - b[std::size_t(i)];
      CHECK(std::abs(res) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("lake at rest over a shelf with a dry beach is a fixed point") {
  RadialParams p;
  auto bottom = [](double r) { return r < 30000 ? -3000.0 : -3000.0 + 0.2 * (r - 30000); };
  RadialState s = make_state(graded_faces(50000, [&](double r) { return -bottom(r); }, 1000, 3000, 50), bottom, rest());
  REQUIRE(s.h.back() == 0.0);
  for (int n = 0; n < 50; ++n) radial_step(s, stable_dt(s, p), p);
  double eta = 0, mom = 0, psi = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s.h[std::size_t(i)] > 0) eta = std::max(eta, std::abs(s.h[std::size_t(i)] + s.B[std::size_t(i)]));
    mom = std::max(mom, std::abs(s.hu[std::size_t(i)]));
    psi = std::max(psi, std::abs(s.psi[std::size_t(i)]));
  }
  CHECK(eta <= 1e-13);
  CHECK(mom <= 1e-13);
  CHECK(psi <= 1e-13);
}

TEST_CASE("mass is conserved with an outer wall") {
  RadialParams p;
  p.outer = OuterBoundary::wall;
  RadialState s = make_state(uniform_faces(0, 20000, 200), flat(500),
                             [](double r) { return std::pair{2 * std::exp(-std::pow(r / 3000, 2)), 0.0}; });
  const double m0 = radial_mass(s);
  for (int n = 0; n < 200; ++n) radial_step(s, stable_dt(s, p), p);
  CHECK(std::abs(radial_mass(s) - m0) <= 1e-10 * m0);

  RadialState flatwater = make_state(uniform_faces(0, 1000, 10), flat(3), rest());
  CHECK(radial_mass(flatwater) == doctest::Approx(pi * 1000 * 1000 * 3).epsilon(1e-14));
  CHECK(plane_mass(flatwater) == doctest::Approx(3000).epsilon(1e-14));
}

TEST_CASE("plane solver converges at second order") {
  RadialParams p;
  const double H = 50, L = 2000, a = 0.05, k = 2 * pi / L;
  auto init = [&](double x) {
    const double e = a * std::sin(k * x);
    return std::pair{e, std::sqrt(p.g / H) * e};
  };
  const double t_end = 10.0;
  const int n_ref = 1024;
  RadialState ref = make_state(uniform_faces(0, L, n_ref), flat(H), init);
  run_to(ref, Geometry::plane, p, t_end);
  std::vector<double> errs;
  for (int n : {32, 64}) {
    RadialState s = make_state(uniform_faces(0, L, n), flat(H), init);
    run_to(s, Geometry::plane, p, t_end);
    const int f = n_ref / n;
    double e = 0;
    for (int i = 0; i < n; ++i) {
      double avg = 0;
      for (int q = 0; q < f; ++q) avg += ref.h[std::size_t(i * f + q)];
      e += std::abs(s.h[std::size_t(i)] - avg / f) * s.dr[std::size_t(i)];
    }
    errs.push_back(e);
  }
  const double ratio = errs[0] / errs[1];
  INFO("ratio " << ratio);
  CHECK(ratio >= 3.4);
  CHECK(ratio <= 4.6);
}

TEST_CASE("plane phase speed matches linear theory") {
  for (bool dispersive : {true, false}) {
    RadialParams p;
    p.dispersive = dispersive;
    const double h0 = 4000, L = 20000, k = 2 * pi / L, a = 0.01;
    analysis::DispersionQuery q;
    q.model = dispersive ? analysis::Model::sgn : analysis::Model::swe;
    q.k = k;
    q.h0 = h0;
    const double c = analysis::omega(q) / k;
    RadialState s = make_state(uniform_faces(0, L, 64), flat(h0), [&](double x) {
      const double e = a * std::sin(k * x);
      return std::pair{e, c * e / h0};
    });
    const double period = L / c;
    std::vector<analysis::LineFrame> frames;
    for (int m = 0; m <= 16; ++m) {
      run_to(s, Geometry::plane, p, m * period / 8);
      analysis::LineFrame fr;
      fr.t = s.time;
      fr.x0 = s.r[0];
      fr.dx = s.dr[0];
      for (int i = 0; i < s.size(); ++i) fr.eta.push_back(s.h[std::size_t(i)] - h0);
      frames.push_back(fr);
    }
    const double measured = analysis::measure_phase_speed(frames, k);
    CHECK(std::abs(measured - c) / c <= (dispersive ? 0.02 : 0.01));
  }
}

TEST_CASE("pulse at large radius follows the plane solution") {
  const RadialParams p;
  const double r0 = 1e6, H = 100;
  auto init = [&](double r) { return std::pair{0.5 * std::exp(-std::pow((r - r0 - 20000) / 2000, 2)), 0.0}; };
  RadialState rad = make_state(uniform_faces(r0, r0 + 40000, 400), flat(H), init);
  RadialState pl = make_state(uniform_faces(r0, r0 + 40000, 400), flat(H), init);
  for (int n = 0; n < 60; ++n) {
    const double dt = std::min(stable_dt(rad, p), stable_dt(pl, p));
    radial_step(rad, dt, p);
    plane_step(pl, dt, p);
  }
  double diff = 0;
  for (int i = 0; i < rad.size(); ++i) diff = std::max(diff, std::abs(rad.h[std::size_t(i)] - pl.h[std::size_t(i)]));
  CHECK(diff <= 0.01 * max_abs_eta(pl));
}

TEST_CASE("graded faces follow the square root of depth") {
  auto depth = [](double r) { return r < 10000 ? 4000.0 : std::max(4000.0 - 0.5 * (r - 10000), 0.0); };
  const auto f = graded_faces(30000, depth, 800, 4000, 40);
  CHECK(f.front() == 0.0);
  CHECK(f.back() == 30000.0);
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double d = f[i + 1] - f[i];
    CHECK(d > 0);
    if (i + 2 < f.size()) CHECK(d == doctest::Approx(std::max(40.0, 800 * std::sqrt(depth(f[i]) / 4000))));
  }
  CHECK_THROWS_AS(graded_faces(100, depth, 10, 4000, 0), Error);
  CHECK_THROWS_AS(make_state({0.0, 1.0, 2.0}, flat(1), rest()), Error);
}

TEST_CASE("transect rows carry radius and surface") {
  const RadialParams p;
  RadialState s = make_state(uniform_faces(0, 100, 4), [](double r) { return r < 60 ? -10.0 : 1.0; }, rest(0.5));
  const auto t = to_transect(s, p);
  REQUIRE(t.size() == 4);
  CHECK(t[0].s == doctest::Approx(12.5));
  CHECK(t[0].eta == doctest::Approx(0.5));
  CHECK(t[0].h == doctest::Approx(10.5));
  CHECK(t[3].eta == doctest::Approx(1.0));
  CHECK(t[3].h == 0.0);
}
