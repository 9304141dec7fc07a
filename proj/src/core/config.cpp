#include "bouss/core/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "bouss/core/error.hpp"

namespace bouss {

namespace {

const std::set<std::string> kScenarioKeys = {
    "name",         "bathymetry", "bathy_depth", "bathy_file",  "initial",
    "ic_amplitude", "ic_width",   "ic_x",        "ic_y",        "ic_wavenumber",
    "radial_dr",    "radial_rmax", "radial_dr_min"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const KeyValue& kv, const std::string& text) {
  double v = 0;
  const char* b = text.data();
  const char* e = b + text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw ConfigError("'" + kv.key + "': not a number: " + text, kv.line);
  return v;
}

int to_int(const KeyValue& kv, const std::string& text) {
  int v = 0;
  const char* b = text.data();
  const char* e = b + text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw ConfigError("'" + kv.key + "': not an integer: " + text, kv.line);
  return v;
}

std::vector<double> to_doubles(const KeyValue& kv) {
  std::vector<double> out;
  if (trim(kv.value).empty()) return out;
  for (const auto& s : split(kv.value, ',')) out.push_back(to_double(kv, s));
  return out;
}

std::vector<int> to_ints(const KeyValue& kv) {
  std::vector<int> out;
  if (trim(kv.value).empty()) return out;
  for (const auto& s : split(kv.value, ',')) out.push_back(to_int(kv, s));
  return out;
}

BoundaryKind to_bc(const KeyValue& kv) {
  if (kv.value == "wall") return BoundaryKind::wall;
  if (kv.value == "extrapolation") return BoundaryKind::extrapolation;
  throw ValidationError(kv.key, "expected wall or extrapolation, got '" + kv.value + "'");
}

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += f(v[i]);
  }
  return s;
}

std::string bc_name(BoundaryKind k) { return k == BoundaryKind::wall ? "wall" : "extrapolation"; }

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::swe: return "swe";
    case Mode::sgn_subcycled: return "sgn_subcycled";
    case Mode::sgn_composite: return "sgn_composite";
  }
  return "?";
}

int SimConfig::ratio_space(int level) const {
  return refine_ratio_space.at(static_cast<std::size_t>(level - 1));
}
int SimConfig::ratio_time(int level) const {
  return refine_ratio_time.at(static_cast<std::size_t>(level - 1));
}

std::vector<KeyValue> parse_key_values(const std::string& text) {
  std::vector<KeyValue> out;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value", line);
    std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ConfigError("empty key", line);
    out.push_back({key, trim(s.substr(eq + 1)), line});
  }
  return out;
}

SimConfig config_from_entries(const std::vector<KeyValue>& entries) {
  SimConfig c;
  std::set<std::string> seen;
  for (const auto& kv : entries) {
    const std::string& k = kv.key;
    seen.insert(k);
    if (k == "g") c.g = to_double(kv, kv.value);
    else if (k == "alpha") c.alpha = to_double(kv, kv.value);
    else if (k == "h_switch") c.h_switch = to_double(kv, kv.value);
    else if (k == "dry_tolerance") c.dry_tolerance = to_double(kv, kv.value);
    else if (k == "sea_level") c.sea_level = to_double(kv, kv.value);
    else if (k == "cfl_target") c.cfl_target = to_double(kv, kv.value);
    else if (k == "max_levels") c.max_levels = to_int(kv, kv.value);
    else if (k == "refine_ratio_space") c.refine_ratio_space = to_ints(kv);
    else if (k == "refine_ratio_time") c.refine_ratio_time = to_ints(kv);
    else if (k == "flag_tolerance") c.flag_tolerance = to_double(kv, kv.value);
    else if (k == "flag_buffer") c.flag_buffer = to_int(kv, kv.value);
    else if (k == "regrid_interval") c.regrid_interval = to_int(kv, kv.value);
    else if (k == "max_patch_size") c.max_patch_size = to_int(kv, kv.value);
    else if (k == "region") {
      // min_level,max_level,x1,x2,y1,y2
      auto v = to_doubles(kv);
      if (v.size() != 6) throw ConfigError("region needs min_level,max_level,x1,x2,y1,y2", kv.line);
      c.regions.push_back({int(v[0]), int(v[1]), v[2], v[3], v[4], v[5]});
    } else if (k == "solver_rtol") c.solver_rtol = to_double(kv, kv.value);
    else if (k == "solver_maxit") c.solver_maxit = to_int(kv, kv.value);
    else if (k == "krylov") {
      if (kv.value == "bicgstab") c.krylov = KrylovKind::bicgstab;
      else if (kv.value == "gmres") c.krylov = KrylovKind::gmres;
      else throw ValidationError(k, "expected bicgstab or gmres");
    } else if (k == "preconditioner") {
      if (kv.value == "ilu0") c.preconditioner = PrecondKind::ilu0;
      else if (kv.value == "jacobi") c.preconditioner = PrecondKind::jacobi;
      else throw ValidationError(k, "expected ilu0 or jacobi");
    } else if (k == "precond_reuse_steps") c.precond_reuse_steps = to_int(kv, kv.value);
    else if (k == "mode") {
      if (kv.value == "swe") c.mode = Mode::swe;
      else if (kv.value == "sgn_subcycled") c.mode = Mode::sgn_subcycled;
      else if (kv.value == "sgn_composite") c.mode = Mode::sgn_composite;
      else throw ValidationError(k, "expected swe, sgn_subcycled or sgn_composite");
    } else if (k == "x_lower") c.x_lower = to_double(kv, kv.value);
    else if (k == "x_upper") c.x_upper = to_double(kv, kv.value);
    else if (k == "y_lower") c.y_lower = to_double(kv, kv.value);
    else if (k == "y_upper") c.y_upper = to_double(kv, kv.value);
    else if (k == "mx") c.mx = to_int(kv, kv.value);
    else if (k == "my") c.my = to_int(kv, kv.value);
    else if (k == "bc_left") c.bc[0] = to_bc(kv);
    else if (k == "bc_right") c.bc[1] = to_bc(kv);
    else if (k == "bc_bottom") c.bc[2] = to_bc(kv);
    else if (k == "bc_top") c.bc[3] = to_bc(kv);
    else if (k == "output_times") c.output_times = to_doubles(kv);
    else if (k == "max_steps") c.max_steps = to_int(kv, kv.value);
    else if (k == "gauges") {
      // x1:y1,x2:y2,...
      c.gauges.clear();
      if (!kv.value.empty()) {
        for (const auto& item : split(kv.value, ',')) {
          auto colon = item.find(':');
          if (colon == std::string::npos) throw ConfigError("gauge must be x:y", kv.line);
          c.gauges.push_back({to_double(kv, trim(item.substr(0, colon))),
                              to_double(kv, trim(item.substr(colon + 1)))});
        }
      }
    } else if (k == "transect") {
      auto v = to_doubles(kv);
      if (v.size() != 5) throw ConfigError("transect needs x0,y0,x1,y1,n", kv.line);
      c.transect = {v[0], v[1], v[2], v[3], int(v[4])};
    } else if (k == "output_dir") c.output_dir = kv.value;
    else if (k == "threads") c.threads = to_int(kv, kv.value);
    else if (k == "dump_system") c.dump_system = kv.value;
    else if (k == "dump_mask") c.dump_mask = kv.value;
    else if (kScenarioKeys.count(k)) c.scenario[k] = kv.value;
    else throw ValidationError(k, "unknown key");
  }

  for (const char* req : {"x_lower", "x_upper", "y_lower", "y_upper", "mx", "my"})
    if (!seen.count(req)) throw ValidationError(req, "required key missing");

  if (!(c.g > 0)) throw ValidationError("g", "must be > 0");
  if (!(c.alpha > 0)) throw ValidationError("alpha", "must be > 0");
  if (!(c.dry_tolerance > 0)) throw ValidationError("dry_tolerance", "must be > 0");
  if (!(c.h_switch >= 0)) throw ValidationError("h_switch", "must be >= 0");
  if (!(c.cfl_target > 0 && c.cfl_target <= 1)) throw ValidationError("cfl_target", "must be in (0, 1]");
  if (!(c.solver_rtol > 0 && c.solver_rtol < 1)) throw ValidationError("solver_rtol", "must be in (0, 1)");
  if (c.solver_maxit < 1) throw ValidationError("solver_maxit", "must be >= 1");
  if (c.max_levels < 1) throw ValidationError("max_levels", "must be >= 1");
  if (!(c.x_upper > c.x_lower)) throw ValidationError("x_upper", "must exceed x_lower");
  if (!(c.y_upper > c.y_lower)) throw ValidationError("y_upper", "must exceed y_lower");
  if (c.mx < 1) throw ValidationError("mx", "must be >= 1");
  if (c.my < 1) throw ValidationError("my", "must be >= 1");
  if (c.flag_buffer < 0) throw ValidationError("flag_buffer", "must be >= 0");
  if (c.regrid_interval < 1) throw ValidationError("regrid_interval", "must be >= 1");
  if (c.max_patch_size < 1) throw ValidationError("max_patch_size", "must be >= 1");
  if (c.precond_reuse_steps < 1) throw ValidationError("precond_reuse_steps", "must be >= 1");
  if (c.threads < 1) throw ValidationError("threads", "must be >= 1");

  const auto transitions = static_cast<std::size_t>(c.max_levels - 1);
  for (int r : c.refine_ratio_space)
    if (r < 2) throw ValidationError("refine_ratio_space", "ratios must be integers >= 2");
  for (int r : c.refine_ratio_time)
    if (r < 2) throw ValidationError("refine_ratio_time", "ratios must be integers >= 2");
  if (c.refine_ratio_space.size() < transitions)
    throw ValidationError("refine_ratio_space", "need one ratio per level transition");
  if (c.refine_ratio_time.empty()) c.refine_ratio_time = c.refine_ratio_space;
  if (c.refine_ratio_time.size() < transitions)
    throw ValidationError("refine_ratio_time", "need one ratio per level transition");
  for (std::size_t i = 1; i < c.output_times.size(); ++i)
    if (!(c.output_times[i] > c.output_times[i - 1]))
      throw ValidationError("output_times", "must be strictly increasing");
  for (const auto& r : c.regions)
    if (r.min_level > r.max_level || r.min_level < 1)
      throw ValidationError("region", "need 1 <= min_level <= max_level");
  return c;
}

SimConfig load_config(const std::string& path) { return load_config(path, {}); }

SimConfig load_config(const std::string& path, const std::vector<KeyValue>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  auto entries = parse_key_values(ss.str());
  entries.insert(entries.end(), overrides.begin(), overrides.end());
  return config_from_entries(entries);
}

std::string to_text(const SimConfig& c) {
  std::ostringstream o;
  auto ints = [](int v) { return std::to_string(v); };
  o << "g=" << fmt(c.g) << "\n"
    << "alpha=" << fmt(c.alpha) << "\n"
    << "h_switch=" << fmt(c.h_switch) << "\n"
    << "dry_tolerance=" << fmt(c.dry_tolerance) << "\n"
    << "sea_level=" << fmt(c.sea_level) << "\n"
    << "cfl_target=" << fmt(c.cfl_target) << "\n"
    << "max_levels=" << c.max_levels << "\n"
    << "refine_ratio_space=" << join(c.refine_ratio_space, ints) << "\n"
    << "refine_ratio_time=" << join(c.refine_ratio_time, ints) << "\n"
    << "flag_tolerance=" << fmt(c.flag_tolerance) << "\n"
    << "flag_buffer=" << c.flag_buffer << "\n"
    << "regrid_interval=" << c.regrid_interval << "\n"
    << "max_patch_size=" << c.max_patch_size << "\n";
  for (const auto& r : c.regions)
    o << "region=" << r.min_level << "," << r.max_level << "," << fmt(r.x1) << "," << fmt(r.x2) << ","
      << fmt(r.y1) << "," << fmt(r.y2) << "\n";
  o << "solver_rtol=" << fmt(c.solver_rtol) << "\n"
    << "solver_maxit=" << c.solver_maxit << "\n"
    << "krylov=" << (c.krylov == KrylovKind::bicgstab ? "bicgstab" : "gmres") << "\n"
    << "preconditioner=" << (c.preconditioner == PrecondKind::ilu0 ? "ilu0" : "jacobi") << "\n"
    << "precond_reuse_steps=" << c.precond_reuse_steps << "\n"
    << "mode=" << to_string(c.mode) << "\n"
    << "x_lower=" << fmt(c.x_lower) << "\n"
    << "x_upper=" << fmt(c.x_upper) << "\n"
    << "y_lower=" << fmt(c.y_lower) << "\n"
    << "y_upper=" << fmt(c.y_upper) << "\n"
    << "mx=" << c.mx << "\n"
    << "my=" << c.my << "\n"
    << "bc_left=" << bc_name(c.bc[0]) << "\n"
    << "bc_right=" << bc_name(c.bc[1]) << "\n"
    << "bc_bottom=" << bc_name(c.bc[2]) << "\n"
    << "bc_top=" << bc_name(c.bc[3]) << "\n"
    << "output_times=" << join(c.output_times, fmt) << "\n"
    << "max_steps=" << c.max_steps << "\n"
    << "gauges=" << join(c.gauges, [](const GaugeLocation& gl) { return fmt(gl.x) + ":" + fmt(gl.y); })
    << "\n";
  if (c.transect.n > 0)
    o << "transect=" << fmt(c.transect.x0) << "," << fmt(c.transect.y0) << "," << fmt(c.transect.x1) << ","
      << fmt(c.transect.y1) << "," << c.transect.n << "\n";
  o << "output_dir=" << c.output_dir << "\n"
    << "threads=" << c.threads << "\n";
  if (!c.dump_system.empty()) o << "dump_system=" << c.dump_system << "\n";
  if (!c.dump_mask.empty()) o << "dump_mask=" << c.dump_mask << "\n";
  for (const auto& [k, v] : c.scenario) o << k << "=" << v << "\n";
  return o.str();
}

}  // namespace bouss
