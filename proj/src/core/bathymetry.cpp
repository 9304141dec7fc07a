#include "bouss/core/bathymetry.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bouss/core/error.hpp"

namespace bouss {

double sample_bathymetry(const Bathymetry& b, double x, double y) {
  if (!(x >= b.x_origin && x <= b.x_max() && y >= b.y_origin && y <= b.y_max())) {
    std::ostringstream msg;
    msg << "bathymetry query (" << x << ", " << y << ") outside raster extent";
    throw Error(msg.str());
  }
  const double fx = (x - b.x_origin) / b.cellsize;
  const double fy = (y - b.y_origin) / b.cellsize;
  int c = std::min(static_cast<int>(std::floor(fx)), b.ncols - 2);
  int r = std::min(static_cast<int>(std::floor(fy)), b.nrows - 2);
  c = std::max(c, 0);
  r = std::max(r, 0);
  const double tx = b.ncols > 1 ? fx - c : 0.0;
  const double ty = b.nrows > 1 ? fy - r : 0.0;
  const int c1 = std::min(c + 1, b.ncols - 1);
  const int r1 = std::min(r + 1, b.nrows - 1);
  // Exact node values when tx or ty is zero.
  if (tx == 0.0 && ty == 0.0) return b.node(c, r);
  const double south = (1 - tx) * b.node(c, r) + tx * b.node(c1, r);
  const double north = (1 - tx) * b.node(c, r1) + tx * b.node(c1, r1);
  return (1 - ty) * south + ty * north;
}

Bathymetry parse_ascii_grid(const std::string& text) {
  std::istringstream in(text);
  Bathymetry b;
  double nodata = -9999;
  bool have[6] = {};
  for (int k = 0; k < 6; ++k) {
    std::string key;
    double v;
    if (!(in >> key >> v)) throw Error("ascii grid: truncated header");
    for (auto& ch : key) ch = static_cast<char>(std::tolower(ch));
    if (key == "ncols") b.ncols = int(v), have[0] = true;
    else if (key == "nrows") b.nrows = int(v), have[1] = true;
    else if (key == "xllcorner") b.x_origin = v, have[2] = true;
    else if (key == "yllcorner") b.y_origin = v, have[3] = true;
    else if (key == "cellsize") b.cellsize = v, have[4] = true;
    else if (key == "nodata_value") nodata = v, have[5] = true;
    else throw Error("ascii grid: unexpected header key '" + key + "'");
  }
  for (bool h : have)
    if (!h) throw Error("ascii grid: incomplete header");
  if (b.ncols < 1 || b.nrows < 1 || !(b.cellsize > 0)) throw Error("ascii grid: bad dimensions");
  b.values.assign(std::size_t(b.ncols) * b.nrows, 0.0);
  for (int r = b.nrows - 1; r >= 0; --r) {
    for (int c = 0; c < b.ncols; ++c) {
      double v;
      if (!(in >> v)) throw Error("ascii grid: too few values");
      if (v == nodata) throw Error("ascii grid: nodata values are not supported");
      b.values[std::size_t(r) * b.ncols + c] = v;
    }
  }
  return b;
}

Bathymetry read_ascii_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open bathymetry file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ascii_grid(ss.str());
}

BathymetryField as_field(Bathymetry bathy) {
  return [b = std::move(bathy)](double x, double y) { return sample_bathymetry(b, x, y); };
}

BathymetryField flat_bottom(double depth) {
  return [depth](double, double) { return -depth; };
}

double radial_shelf_profile(double r) {
  constexpr double ocean = -3000.0, shelf = -100.0;
  if (r <= 40e3) return ocean;
  if (r <= 80e3) return ocean + (shelf - ocean) * (r - 40e3) / 40e3;
  if (r <= 100e3) return shelf;
  return shelf + (r - 100e3) / 200.0;
}

BathymetryField radial_shelf() {
  return [](double x, double y) { return radial_shelf_profile(std::hypot(x, y)); };
}

}  // namespace bouss
