// Command-line entry point: run, dispersion, compare, radial1d.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "bouss/amr/driver.hpp"
#include "bouss/analysis/analysis.hpp"
#include "bouss/core/error.hpp"
#include "bouss/radial/radial.hpp"
#include "bouss/scenario.hpp"

namespace {

constexpr int kOk = 0, kRuntime = 1, kUsage = 2;

// Usage and configuration problems map to exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<bouss::KeyValue> parse_overrides(const std::vector<std::string>& extras) {
  std::vector<bouss::KeyValue> out;
  for (const std::string& a : extras) {
    if (a.rfind("--", 0) != 0 || a.find('=') == std::string::npos)
      throw UsageError("unexpected argument '" + a + "' (overrides take the form --key=value)");
    const auto eq = a.find('=');
    out.push_back({a.substr(2, eq - 2), a.substr(eq + 1), 0});
  }
  return out;
}

bouss::SimConfig load(const std::string& path, const std::vector<std::string>& extras) {
  if (!std::filesystem::exists(path)) throw UsageError("config file '" + path + "' not found");
  return bouss::load_config(path, parse_overrides(extras));
}

int cmd_run(const std::string& path, const std::vector<std::string>& extras) {
  const bouss::SimConfig cfg = load(path, extras);
  const bouss::BathymetryField bathy = bouss::scenario_bathymetry(cfg);
  const auto ic = bouss::scenario_initial(cfg, bathy);
  const bouss::amr::RunSummary s = bouss::amr::run_driver(cfg, bathy, ic);
  std::printf("completed %ld coarse steps to t=%.6g s in %.3g s (max |eta|=%.3g, mass drift %.3g)\n", s.coarse_steps,
              s.final_time, s.wall_seconds, s.max_abs_eta,
              s.mass_initial != 0 ? (s.mass_final - s.mass_initial) / s.mass_initial : 0.0);
  return kOk;
}

int cmd_radial(const std::string& path, const std::vector<std::string>& extras) {
  const bouss::SimConfig cfg = load(path, extras);
  bouss::radial::RadialState st = bouss::scenario_radial_state(cfg);
  const bouss::radial::RadialParams p = bouss::radial::radial_params(cfg);
  const std::string dir = cfg.output_dir.empty() ? "." : cfg.output_dir;
  std::filesystem::create_directories(dir);
  auto write = [&](int n) {
    char name[32];
    std::snprintf(name, sizeof name, "radial_%04d.csv", n);
    std::ofstream out(std::filesystem::path(dir) / name);
    if (!out) throw bouss::Error("cannot write radial transect in '" + dir + "'");
    bouss::analysis::write_transect_csv(out, bouss::radial::to_transect(st, p));
  };
  int n = 0;
  write(n++);
  for (double t : cfg.output_times) {
    if (t <= 0) continue;
    bouss::radial::run_to(st, bouss::radial::Geometry::radial, p, t);
    write(n++);
  }
  std::printf("radial reference: %d cells, %d transects, mass %.17g\n", st.size(), n, bouss::radial::radial_mass(st));
  return kOk;
}

int cmd_dispersion(double h0, double g, double alpha, double beta, double kmin, double kmax, int n,
                   const std::string& out_path) {
  if (!(kmin > 0) || !(kmax > kmin) || n < 2) throw UsageError("invalid kh0 range");
  const auto rows = bouss::analysis::dispersion_table(h0, g, alpha, beta, kmin, kmax, n);
  if (out_path.empty()) {
    bouss::analysis::write_dispersion_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path);
    if (!out) throw UsageError("cannot write '" + out_path + "'");
    bouss::analysis::write_dispersion_csv(out, rows);
  }
  return kOk;
}

int cmd_compare(const std::string& a, const std::string& b, double s_lo, double s_hi) {
  for (const std::string& f : {a, b})
    if (!std::filesystem::exists(f)) throw UsageError("transect file '" + f + "' not found");
  const auto sim = bouss::analysis::read_transect_csv(a);
  const auto ref = bouss::analysis::read_transect_csv(b);
  if (sim.empty() || ref.empty()) throw UsageError("empty transect file");
  if (!(s_hi > s_lo)) {
    // Default window: the wet part of the first transect inside the second's range.
    s_lo = 1e300;
    s_hi = -1e300;
    for (const auto& r : sim)
      if (r.h > 0) {
        s_lo = std::min(s_lo, r.s);
        s_hi = std::max(s_hi, r.s);
      }
    s_lo = std::max(s_lo, ref.front().s);
    s_hi = std::min(s_hi, ref.back().s);
  }
  const auto e = bouss::analysis::transect_error(sim, ref, s_lo, s_hi);
  std::printf("s_lo=%.17g\ns_hi=%.17g\nl1=%.17g\nlinf=%.17g\npeak_amplitude_error=%.17g\npeak_location_error=%.17g\n",
              s_lo, s_hi, e.l1, e.linf, e.peak_amplitude_error, e.peak_location_error);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dispersive tsunami simulator with adaptive mesh refinement"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "Run a scenario; overrides as --key=value");
  run->add_option("config", config, "Scenario config file")->required();
  run->allow_extras();

  auto* rad = app.add_subcommand("radial1d", "Run the 1D radial reference for a scenario");
  rad->add_option("config", config, "Scenario config file")->required();
  rad->allow_extras();

  double h0 = 4000, g = 9.81, alpha = 1.153, beta = 0.0, kmin = 0.01, kmax = 60;
  int npts = 200;
  std::string out;
  auto* disp = app.add_subcommand("dispersion", "Tabulate dispersion relations and group velocities");
  disp->add_option("--h0", h0, "Still-water depth [m]");
  disp->add_option("--g", g, "Gravity [m/s^2]");
  disp->add_option("--alpha", alpha, "SGN alpha");
  disp->add_option("--beta", beta, "Madsen-Sorensen beta");
  disp->add_option("--kh-min", kmin, "Smallest kh0");
  disp->add_option("--kh-max", kmax, "Largest kh0");
  disp->add_option("--n", npts, "Number of kh0 samples");
  disp->add_option("-o,--out", out, "Output CSV (default stdout)");

  std::string fa, fb;
  double s_lo = 0, s_hi = -1;
  auto* cmp = app.add_subcommand("compare", "Error norms between two transect CSVs");
  cmp->add_option("sim", fa, "Simulated transect")->required();
  cmp->add_option("ref", fb, "Reference transect")->required();
  cmp->add_option("--s-lo", s_lo, "Window start [m]");
  cmp->add_option("--s-hi", s_hi, "Window end [m]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(config, run->remaining());
    if (*rad) return cmd_radial(config, rad->remaining());
    if (*disp) return cmd_dispersion(h0, g, alpha, beta, kmin, kmax, npts, out);
    if (*cmp) return cmd_compare(fa, fb, s_lo, s_hi);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const bouss::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kUsage;
  } catch (const bouss::ValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntime;
  }
  return kUsage;
}
