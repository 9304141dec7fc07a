#include "bouss/scenario.hpp"

#include <cmath>

#include "bouss/analysis/analysis.hpp"
#include "bouss/core/error.hpp"

namespace bouss {

namespace {

std::string get(const SimConfig& cfg, const std::string& key, const std::string& fallback) {
  auto it = cfg.scenario.find(key);
  return it == cfg.scenario.end() ? fallback : it->second;
}

double get_num(const SimConfig& cfg, const std::string& key, double fallback) {
  auto it = cfg.scenario.find(key);
  if (it == cfg.scenario.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(key, "expected a number, got '" + it->second + "'");
  }
}

double still_depth(const SimConfig& cfg, const BathymetryField& b, double x, double y) {
  return std::max(cfg.sea_level - b(x, y), 0.0);
}

}  // namespace

BathymetryField scenario_bathymetry(const SimConfig& cfg) {
  const std::string kind = get(cfg, "bathymetry", "flat");
  if (kind == "flat") {
    const double d = get_num(cfg, "bathy_depth", 4000.0);
    if (!(d > 0)) throw ValidationError("bathy_depth", "must be > 0");
    return flat_bottom(d);
  }
  if (kind == "radial_shelf") {
    const double cx = get_num(cfg, "ic_x", 0.0), cy = get_num(cfg, "ic_y", 0.0);
    return [cx, cy](double x, double y) { return radial_shelf_profile(std::hypot(x - cx, y - cy)); };
  }
  if (kind == "file") {
    const std::string path = get(cfg, "bathy_file", "");
    if (path.empty()) throw ValidationError("bathy_file", "required when bathymetry=file");
    return as_field(read_ascii_grid(path));
  }
  throw ValidationError("bathymetry", "unknown source '" + kind + "'");
}

amr::InitialCondition scenario_initial(const SimConfig& cfg, const BathymetryField& bathymetry) {
  const std::string kind = get(cfg, "initial", "lake_at_rest");
  const double sea = cfg.sea_level;
  if (kind == "lake_at_rest") return [sea](double, double) { return amr::lake_at_rest_state(sea); };
  const double A = get_num(cfg, "ic_amplitude", 1.0);
  if (kind == "gaussian") {
    const double W = get_num(cfg, "ic_width", 2000.0);
    if (!(W > 0)) throw ValidationError("ic_width", "must be > 0");
    const double cx = get_num(cfg, "ic_x", 0.0), cy = get_num(cfg, "ic_y", 0.0);
    return [=](double x, double y) {
      const double d2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (W * W);
      return amr::InitialState{sea + A * std::exp(-d2), 0.0, 0.0};
    };
  }
  if (kind == "sine") {
    const double k = get_num(cfg, "ic_wavenumber", 0.0);
    if (!(k > 0)) throw ValidationError("ic_wavenumber", "must be > 0");
    const SimConfig c = cfg;
    return [=](double x, double y) {
      const double h0 = still_depth(c, bathymetry, x, y);
      if (h0 <= 0) return amr::InitialState{sea, 0.0, 0.0};
      const analysis::Model m = c.mode == Mode::swe ? analysis::Model::swe : analysis::Model::sgn;
      const double speed = analysis::omega({m, k, h0, c.g, c.alpha, 0.0}) / k;
      const double eta = A * std::sin(k * x);
      return amr::InitialState{sea + eta, speed * eta / h0, 0.0};
    };
  }
  throw ValidationError("initial", "unknown initial condition '" + kind + "'");
}

radial::RadialState scenario_radial_state(const SimConfig& cfg) {
  const BathymetryField bathy = scenario_bathymetry(cfg);
  const amr::InitialCondition ic = scenario_initial(cfg, bathy);
  const double cx = get_num(cfg, "ic_x", 0.0), cy = get_num(cfg, "ic_y", 0.0);
  const double rmax = get_num(cfg, "radial_rmax", cfg.x_upper - cx);
  const double dr = get_num(cfg, "radial_dr", 25.0);
  if (!(rmax > 0)) throw ValidationError("radial_rmax", "must be > 0");
  if (!(dr > 0)) throw ValidationError("radial_dr", "must be > 0");
  auto bottom = [=](double r) { return bathy(cx + r, cy); };
  auto eta_u = [=](double r) {
    const amr::InitialState s = ic(cx + r, cy);
    return std::pair<double, double>{s.eta, s.u};
  };
  std::vector<double> faces;
  if (get(cfg, "bathymetry", "flat") == "flat") {
    faces = radial::uniform_faces(0.0, rmax, std::max(3, int(std::lround(rmax / dr))));
  } else {
    const double dr_min = get_num(cfg, "radial_dr_min", 0.25 * dr);
    double deep = 0;
    for (int m = 0; m <= 1000; ++m) deep = std::max(deep, -bottom(rmax * m / 1000.0) + cfg.sea_level);
    if (!(deep > 0)) throw ValidationError("bathymetry", "radial reduction has no water");
    faces = radial::graded_faces(rmax, [&](double r) { return cfg.sea_level - bottom(r); }, dr, deep, dr_min);
  }
  return radial::make_state(std::move(faces), bottom, eta_u);
}

}  // namespace bouss
