#include "bouss/amr/driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>

#include "bouss/core/error.hpp"

namespace bouss::amr {

namespace {

bool covered(const Hierarchy& H, int l, int i, int j) {
  if (l >= H.finest()) return false;
  const int r = H.domain.ratios.at(std::size_t(l - 1));
  for (const Patch& f : H.level(l + 1).patches)
    if (f.box.contains(i * r, j * r)) return true;
  return false;
}

std::string numbered(const std::string& dir, const std::string& stem, int n, const std::string& ext) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", n);
  return (std::filesystem::path(dir) / (stem + "_" + buf + ext)).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

struct Extremes {
  double eta = 0, psi = 0;
};

Extremes measure(const Hierarchy& H) {
  Extremes e;
  for (int l = 1; l <= H.finest(); ++l)
    for (const Patch& p : H.level(l).patches)
      for (int j = 0; j < p.ny(); ++j)
        for (int i = 0; i < p.nx(); ++i) {
          if (covered(H, l, p.box.i_lo + i, p.box.j_lo + j)) continue;
          e.psi = std::max({e.psi, std::abs(p.psi1(i, j)), std::abs(p.psi2(i, j))});
          if (p.h(i, j) >= H.cfg.dry_tolerance)
            e.eta = std::max(e.eta, std::abs(p.h(i, j) + p.B(i, j) - H.cfg.sea_level));
        }
  return e;
}

class Writer {
 public:
  Writer(const Hierarchy& H) : H_(H), dir_(H.cfg.output_dir) {
    if (dir_.empty()) return;
    std::filesystem::create_directories(dir_);
    for (std::size_t g = 0; g < H.cfg.gauges.size(); ++g) {
      gauges_.push_back(std::make_unique<std::ofstream>(open_out(numbered(dir_, "gauge", int(g), ".csv"))));
      *gauges_.back() << "t,h,hu,hv,eta,level\n";
      gauges_.back()->precision(17);
    }
  }

  void gauges(double t) {
    for (std::size_t g = 0; g < gauges_.size(); ++g) {
      const PointSample s = sample_point(H_, H_.cfg.gauges[g].x, H_.cfg.gauges[g].y);
      *gauges_[g] << t << ',' << s.q.h << ',' << s.q.hu << ',' << s.q.hv << ',' << s.eta << ',' << s.level << '\n';
    }
  }

  void frame(double t, int n) {
    if (dir_.empty()) return;
    std::ofstream f = open_out(numbered(dir_, "frame", n, ".txt"));
    write_frame(f, H_, t);
    if (H_.cfg.transect.n > 0) {
      std::ofstream tr = open_out(numbered(dir_, "transect", n, ".csv"));
      analysis::write_transect_csv(tr, sample_transect(H_, H_.cfg.transect));
    }
  }

  bool active() const { return !dir_.empty(); }

 private:
  const Hierarchy& H_;
  std::string dir_;
  std::vector<std::unique_ptr<std::ofstream>> gauges_;
};

}  // namespace

RunSummary run_driver(const SimConfig& cfg, BathymetryField field, const InitialCondition& ic, const OutputHook& hook,
                      Hierarchy* final) {
  const auto t_start = std::chrono::steady_clock::now();
  Hierarchy H = build_hierarchy(cfg, std::move(field), ic);
  RunSummary sum;
  sum.levels.assign(std::size_t(cfg.max_levels), {});
  for (LevelStats& s : sum.levels) s.min_per_coarse_step = std::numeric_limits<long>::max();
  sum.mass_initial = composite_mass(H);
  {
    const Extremes e = measure(H);
    sum.max_abs_eta = e.eta;
    sum.max_abs_psi = e.psi;
  }
  if (!cfg.dump_system.empty())
    for (int l = 1; l <= H.finest(); ++l) dump_level_system(H, l, cfg.dump_system + "_level" + std::to_string(l) + ".mtx");
  if (!cfg.dump_mask.empty())
    for (int l = 1; l <= H.finest(); ++l) dump_level_mask(H, l, cfg.dump_mask + "_level" + std::to_string(l) + ".txt");

  Writer out(H);
  int frame = 0;
  out.frame(0.0, frame);
  out.gauges(0.0);
  if (hook) hook(H, 0.0, frame);
  ++frame;

  std::size_t next = 0;
  while (next < cfg.output_times.size() && cfg.output_times[next] <= 0.0) ++next;
  double t = 0.0;
  StepCounters counts;
  while (next < cfg.output_times.size() && sum.coarse_steps < cfg.max_steps) {
    const double target = cfg.output_times[next];
    double dt = stable_dt(H);
    bool hit = false;
    if (!std::isfinite(dt) || t + dt >= target - 1e-12 * std::max(1.0, std::abs(target))) {
      dt = target - t;
      hit = true;
    }
    for (int attempt = 0;; ++attempt) {
      Hierarchy backup = H;
      try {
        coarse_step(H, dt, counts);
        break;
      } catch (const StepRejected& e) {
        if (attempt >= 10)
          throw Error("coarse step " + std::to_string(sum.coarse_steps + 1) + " at t=" + std::to_string(t) + ": " +
                      e.what() + " after 10 retries");
        H = std::move(backup);
        dt *= 0.5;
        hit = false;
      } catch (const Error& e) {
        throw Error("coarse step " + std::to_string(sum.coarse_steps + 1) + " at t=" + std::to_string(t) + ": " +
                    e.what());
      }
    }
    ++sum.coarse_steps;
    for (std::size_t l = 0; l < sum.levels.size(); ++l) {
      const long n = l < counts.solves.size() ? counts.solves[l] : 0;
      LevelStats& s = sum.levels[l];
      s.solves += n;
      s.min_per_coarse_step = std::min(s.min_per_coarse_step, n);
      s.max_per_coarse_step = std::max(s.max_per_coarse_step, n);
    }
    if (hit) {
      for (Level& L : H.levels) L.time = target;
      ++next;
    }
    t = H.level(1).time;
    const Extremes e = measure(H);
    sum.max_abs_eta = std::max(sum.max_abs_eta, e.eta);
    sum.max_abs_psi = std::max(sum.max_abs_psi, e.psi);
    out.gauges(t);
    if (hit) {
      out.frame(t, frame);
      if (hook) hook(H, t, frame);
      ++frame;
    }
  }
  for (std::size_t l = 0; l < sum.levels.size(); ++l) {
    LevelStats& s = sum.levels[l];
    if (sum.coarse_steps == 0) s.min_per_coarse_step = 0;
    if (int(l) < H.finest()) s.krylov_iterations = H.levels[l].krylov_iterations;
  }
  sum.final_time = t;
  sum.mass_final = composite_mass(H);
  sum.frames_written = out.active() ? frame : 0;
  sum.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  if (out.active()) {
    std::ofstream m = open_out((std::filesystem::path(cfg.output_dir) / "manifest.txt").string());
    write_manifest(m, cfg, sum);
  }
  if (final) *final = std::move(H);
  return sum;
}

PointSample sample_point(const Hierarchy& H, double x, double y) {
  const Domain& d = H.domain;
  if (x < d.x_lower || x > d.x_upper || y < d.y_lower || y > d.y_upper)
    throw Error("sample point (" + std::to_string(x) + ", " + std::to_string(y) + ") outside the domain");
  for (int l = H.finest(); l >= 1; --l) {
    const Box b = d.box(l);
    const int i = std::clamp(int(std::floor((x - d.x_lower) / d.dx(l))), b.i_lo, b.i_hi);
    const int j = std::clamp(int(std::floor((y - d.y_lower) / d.dy(l))), b.j_lo, b.j_hi);
    for (const Patch& p : H.level(l).patches) {
      if (!p.box.contains(i, j)) continue;
      const int li = i - p.box.i_lo, lj = j - p.box.j_lo;
      PointSample s;
      s.q = p.state(li, lj);
      s.B = p.B(li, lj);
      s.eta = eta_of(s.q, s.B, H.cfg.dry_tolerance).value;
      s.level = l;
      s.x = p.xc(li);
      s.y = p.yc(lj);
      return s;
    }
  }
  throw Error("sample point not covered by level 1");
}

std::vector<analysis::TransectRow> sample_transect(const Hierarchy& H, const TransectSpec& spec) {
  std::vector<analysis::TransectRow> rows;
  const double lx = spec.x1 - spec.x0, ly = spec.y1 - spec.y0;
  const double len = std::hypot(lx, ly);
  const double ux = len > 0 ? lx / len : 1.0, uy = len > 0 ? ly / len : 0.0;
  for (int m = 0; m < spec.n; ++m) {
    const double f = spec.n > 1 ? double(m) / (spec.n - 1) : 0.0;
    const PointSample p = sample_point(H, spec.x0 + f * lx, spec.y0 + f * ly);
    if (!rows.empty() && rows.back().x == p.x && rows.back().y == p.y && rows.back().level == p.level) continue;
    analysis::TransectRow r;
    r.s = (p.x - spec.x0) * ux + (p.y - spec.y0) * uy;
    r.x = p.x;
    r.y = p.y;
    r.eta = p.eta;
    r.h = p.q.h;
    r.B = p.B;
    r.level = p.level;
    rows.push_back(r);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.s < b.s; });
  return rows;
}

}  // namespace bouss::amr
