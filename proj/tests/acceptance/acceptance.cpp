// Acceptance runs A1..A9. One PASS/FAIL line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bouss/amr/driver.hpp"
#include "bouss/analysis/analysis.hpp"
#include "bouss/core/error.hpp"
#include "bouss/linalg/kernels.hpp"
#include "bouss/radial/radial.hpp"
#include "bouss/scenario.hpp"

using namespace bouss;
namespace fs = std::filesystem;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* id, const Result& r) {
  std::printf("%s %s  %s\n", id, r.pass ? "PASS" : "FAIL", r.detail.c_str());
  std::fflush(stdout);
  if (!r.pass) ++failures;
}

template <class F>
void run_criterion(const char* id, F&& f) {
  try {
    report(id, f());
  } catch (const std::exception& e) {
    report(id, {false, std::string("error: ") + e.what()});
  }
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const fs::path scenarios = BOUSS_SCENARIO_DIR;
const fs::path work = "acceptance_out";

SimConfig scenario(const std::string& file, std::vector<KeyValue> overrides, const std::string& out) {
  overrides.push_back({"output_dir", (work / out).string(), 0});
  return load_config((scenarios / file).string(), overrides);
}

struct Run {
  amr::RunSummary summary;
  std::vector<analysis::TransectRow> transect;  // at the last output time
  fs::path dir;
};

Run run(const SimConfig& cfg) {
  Run r;
  r.dir = cfg.output_dir;
  const BathymetryField b = scenario_bathymetry(cfg);
  const amr::InitialCondition ic = scenario_initial(cfg, b);
  amr::Hierarchy H;
  r.summary = amr::run_driver(cfg, b, ic, {}, &H);
  r.transect = amr::sample_transect(H, cfg.transect);
  return r;
}

std::map<std::string, std::string> read_manifest(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot read " + p.string());
  std::map<std::string, std::string> m;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) m[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- A2: plane solver phase speed --------------------------------------------------

double plane_phase_speed(bool dispersive, double h0, double kh0, double amplitude, double g, double alpha) {
  const double k = kh0 / h0;
  const double wavelength = 2 * std::numbers::pi / k;
  const int per_wave = 64, waves = 4;
  radial::RadialParams p;
  p.g = g;
  p.alpha = alpha;
  p.dispersive = dispersive;
  analysis::DispersionQuery q{dispersive ? analysis::Model::sgn : analysis::Model::swe, k, h0, g, alpha, 0.0};
  const double c = analysis::omega(q) / k;
  radial::RadialState s = radial::make_state(
      radial::uniform_faces(0.0, waves * wavelength, waves * per_wave), [h0](double) { return -h0; },
      [&](double x) {
        const double eta = amplitude * std::sin(k * x);
        return std::pair{eta, c * eta / h0};
      });
  const double period = wavelength / c;
  std::vector<analysis::LineFrame> frames;
  for (int n = 0; n <= 16; ++n) {
    radial::run_to(s, radial::Geometry::plane, p, n * period / 8);
    analysis::LineFrame f;
    f.t = s.time;
    f.x0 = s.r.front();
    f.dx = s.dr.front();
    f.eta = s.h;
    for (double& e : f.eta) e -= h0;
    frames.push_back(std::move(f));
  }
  return analysis::measure_phase_speed(frames, k);
}

}  // namespace

int main() {
  fs::create_directories(work);
  std::printf("kernels: %s\n", linalg::kernels::name(linalg::kernels::active().isa));

  run_criterion("A1", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const Run r = run(scenario("lake-at-rest.cfg", {{"max_steps", "100", 0}}, "a1"));
    const double wall = seconds_since(t0);
    const auto& s = r.summary;
    return Result{s.coarse_steps == 100 && s.max_abs_eta <= 1e-12 && s.max_abs_psi <= 1e-12 && wall < 30.0,
                  fmt("steps=%ld max|eta|=%.3g max|psi|=%.3g runtime=%.1fs (limits 1e-12, 1e-12, 30s)",
                      s.coarse_steps, s.max_abs_eta, s.max_abs_psi, wall)};
  });

  run_criterion("A2", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const double h0 = 1000, g = 9.81, alpha = 1.153, kh0 = 1.0;
    const double c_sgn = analysis::omega({analysis::Model::sgn, kh0 / h0, h0, g, alpha, 0.0}) / (kh0 / h0);
    const double c0 = std::sqrt(g * h0);
    const double m_sgn = plane_phase_speed(true, h0, kh0, 0.01, g, alpha);
    const double m_swe = plane_phase_speed(false, h0, kh0, 0.01, g, alpha);
    const double e_sgn = std::abs(m_sgn - c_sgn) / c_sgn, below = 1 - m_sgn / c0, e_swe = std::abs(m_swe - c0) / c0;
    const double wall = seconds_since(t0);
    return Result{e_sgn <= 0.02 && below >= 0.08 && e_swe <= 0.01 && wall < 60.0,
                  fmt("sgn c=%.4f (theory %.4f, err %.3f%%, %.2f%% below sqrt(gh)) swe c=%.4f (err %.3f%%) "
                      "runtime=%.1fs",
                      m_sgn, c_sgn, 100 * e_sgn, 100 * below, m_swe, 100 * e_swe, wall)};
  });

  run_criterion("A8", [] {
    std::ostringstream a, b;
    analysis::write_dispersion_csv(a, analysis::dispersion_table(1.0, 9.81, 1.153, 0.0, 0.01, 50.0, 200));
    analysis::write_dispersion_csv(b, analysis::dispersion_table(1.0, 9.81, 1.0, 0.0, 0.01, 50.0, 200));
    struct Row {
      double kh0, omega, cg;
    };
    auto parse = [](const std::string& text) {
      std::map<std::string, std::vector<Row>> by_model;
      std::istringstream in(text);
      std::string line;
      std::getline(in, line);
      while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string f[4];
        for (auto& x : f) std::getline(ls, x, ',');
        by_model[f[1]].push_back({std::stod(f[0]), std::stod(f[2]), std::stod(f[3])});
      }
      return by_model;
    };
    auto ta = parse(a.str()), tb = parse(b.str());
    bool swe_one = true;
    for (const Row& r : ta["swe"]) swe_one = swe_one && std::abs(r.cg - 1.0) <= 1e-8;
    const Row& airy50 = ta["airy"].back();
    const Row& sgn50 = ta["sgn"].back();
    double diff = 0;
    const auto& s1 = tb["sgn"];
    const auto& ms0 = tb["ms"];
    bool same_len = s1.size() == ms0.size() && !s1.empty();
    for (std::size_t i = 0; same_len && i < s1.size(); ++i)
      diff = std::max({diff, std::abs(s1[i].omega - ms0[i].omega), std::abs(s1[i].cg - ms0[i].cg)});
    const bool at50 = std::abs(airy50.kh0 - 50.0) < 1e-9;
    return Result{swe_one && at50 && airy50.cg < 0.15 && sgn50.cg > 0.2 && same_len && diff <= 1e-12,
                  fmt("swe==1:%s airy(50)=%.4f sgn1.153(50)=%.4f max|sgn1-ms0|=%.3g", swe_one ? "yes" : "no",
                      airy50.cg, sgn50.cg, diff)};
  });

  // The 1D reference is shared by A3 and A5.
  const SimConfig base = scenario("radial-flat.cfg", {}, "a3");
  std::vector<analysis::TransectRow> ref;
  {
    radial::RadialState s = scenario_radial_state(base);
    const radial::RadialParams p = radial::radial_params(base);
    radial::run_to(s, radial::Geometry::radial, p, base.output_times.back());
    ref = radial::to_transect(s, p);
    std::ofstream out(work / "reference.csv");
    analysis::write_transect_csv(out, ref);
  }
  const double coarse_dx = (base.x_upper - base.x_lower) / base.mx;

  // A3 runs alone so its runtime is not affected by the parallel batch.
  Run a3;
  double a3_wall = 0;
  bool a3_ok = false;
  run_criterion("A3", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    a3 = run(base);
    a3_wall = seconds_since(t0);
    a3_ok = true;
    const double lo = std::max(a3.transect.front().s, ref.front().s);
    const double hi = std::min(a3.transect.back().s, ref.back().s);
    const analysis::TransectError e = analysis::transect_error(a3.transect, ref, lo, hi);
    const analysis::Crest cr = analysis::leading_crest(ref, lo, hi);
    return Result{std::abs(e.peak_amplitude_error) <= 0.05 && std::abs(e.peak_location_error) <= 2 * coarse_dx &&
                      a3_wall < 600.0,
                  fmt("reference crest %.5f m at s=%.0f m; amplitude error %.3f%% (limit 5%%), location error "
                      "%.1f m (limit %.0f m), runtime=%.1fs (limit 600s)",
                      cr.eta, cr.s, 100 * e.peak_amplitude_error, e.peak_location_error, 2 * coarse_dx, a3_wall)};
  });

  run_criterion("A7", [&] {
    if (!a3_ok) throw Error("A3 run did not complete");
    auto m = read_manifest(a3.dir / "manifest.txt");
    auto get = [&](const std::string& k) { return std::stol(m.at(k)); };
    const long steps = get("coarse_steps");
    bool ok = m.at("refine_ratio_time") == "2,2" && steps > 0;
    std::string d;
    const long expect[3] = {2, 4, 4};
    for (int l = 1; l <= 3; ++l) {
      const std::string k = std::to_string(l);
      const long lo = get("solves_per_coarse_step_min_level_" + k), hi = get("solves_per_coarse_step_max_level_" + k),
                 tot = get("solves_level_" + k);
      ok = ok && lo == expect[l - 1] && hi == expect[l - 1] && tot == expect[l - 1] * steps;
      d += fmt("level %d: %ld..%ld per coarse step, %ld total; ", l, lo, hi, tot);
    }
    return Result{ok, d + fmt("%ld coarse steps (expected 2, 4, 4 per step)", steps)};
  });

  // Remaining runs are independent; run them concurrently.
  auto launch = [](SimConfig cfg) { return std::async(std::launch::async, [cfg] { return run(cfg); }); };
  auto f4 = launch(scenario("radial-flat.cfg", {{"mode", "sgn_composite", 0}}, "a4"));
  auto f5a = launch(scenario("radial-flat.cfg", {{"max_levels", "2", 0}}, "a5_l2"));
  auto f5c = launch(scenario("radial-flat.cfg",
                             {{"max_levels", "4", 0}, {"refine_ratio_space", "2,2,2", 0}, {"refine_ratio_time", "2,2,2", 0}},
                             "a5_l4"));
  auto f6 = launch(scenario("radial-flat.cfg", {{"output_times", "1e9", 0}, {"max_steps", "200", 0}}, "a6"));
  auto f9 = launch(scenario("radial-flat.cfg", {{"mode", "swe", 0}}, "a9"));

  run_criterion("A4", [&] {
    const Run c = f4.get();
    if (!a3_ok) throw Error("A3 run did not complete");
    const double lo = a3.transect.front().s, hi = a3.transect.back().s;
    const double amp = analysis::leading_crest(a3.transect, lo, hi).eta;
    double dmax = 0, s_at = 0;
    for (const auto& row : a3.transect) {
      const double d = std::abs(row.eta - analysis::eta_at(c.transect, row.s));
      if (d > dmax) dmax = d, s_at = row.s;
    }
    return Result{dmax <= 0.03 * amp, fmt("max|d eta|=%.3g m at s=%.0f m, leading crest %.5f m, ratio %.2f%% (limit 3%%)",
                                          dmax, s_at, amp, 100 * dmax / amp)};
  });

  run_criterion("A5", [&] {
    const Run r2 = f5a.get();
    const Run r4 = f5c.get();
    if (!a3_ok) throw Error("A3 run did not complete");
    const analysis::Crest cr = analysis::leading_crest(ref, ref.front().s, ref.back().s);
    const double lo = cr.s - 15000, hi = cr.s + 15000;
    const double e2 = analysis::transect_error(r2.transect, ref, lo, hi).l1;
    const double e3 = analysis::transect_error(a3.transect, ref, lo, hi).l1;
    const double e4 = analysis::transect_error(r4.transect, ref, lo, hi).l1;
    return Result{e2 > e3 && e3 > e4,
                  fmt("L1 over [%.0f, %.0f] m: 2 levels %.4g, 3 levels %.4g, 4 levels %.4g (m^2, strictly decreasing)",
                      lo, hi, e2, e3, e4)};
  });

  run_criterion("A6", [&] {
    const Run r = f6.get();
    const auto& s = r.summary;
    const double drift = std::abs(s.mass_final - s.mass_initial) / s.mass_initial;
    return Result{s.coarse_steps == 200 && drift <= 1e-12,
                  fmt("coarse steps=%ld relative mass drift=%.3g (limit 1e-12)", s.coarse_steps, drift)};
  });

  run_criterion("A9", [&] {
    const Run w = f9.get();
    if (!a3_ok) throw Error("A3 run did not complete");
    auto count = [](const std::vector<analysis::TransectRow>& t) {
      double emax = 0;
      for (const auto& r : t) emax = std::max(emax, std::abs(r.eta));
      const analysis::Crest c = analysis::leading_crest(t, t.front().s, t.back().s);
      return std::pair{analysis::count_extrema(t, c.s, 1e-3 * emax), c.s};
    };
    const auto [n_sgn, s_sgn] = count(a3.transect);
    const auto [n_swe, s_swe] = count(w.transect);
    return Result{n_sgn > n_swe, fmt("local extrema behind the leading crest: sgn %d (crest at %.0f m), swe %d "
                                     "(crest at %.0f m)",
                                     n_sgn, s_sgn, n_swe, s_swe)};
  });

  std::printf("%s\n", failures == 0 ? "all acceptance criteria passed" : "acceptance criteria failed");
  return failures == 0 ? 0 : 1;
}
