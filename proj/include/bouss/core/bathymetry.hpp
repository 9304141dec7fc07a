#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bouss {

/// Node-registered raster of bottom elevation B (negative below sea level).
/// Node (c, r) sits at x = x_origin + c*cellsize, y = y_origin + r*cellsize,
/// with r counted from the south row.
struct Bathymetry {
  int ncols = 0;
  int nrows = 0;
  double x_origin = 0;
  double y_origin = 0;
  double cellsize = 1;
  double sea_level = 0;
  std::vector<double> values;  // south row first, x fastest

  double node(int c, int r) const { return values[std::size_t(r) * ncols + c]; }
  double x_max() const { return x_origin + (ncols - 1) * cellsize; }
  double y_max() const { return y_origin + (nrows - 1) * cellsize; }
};

/// Bilinear interpolation of the four surrounding nodes; exact at nodes.
/// Throws bouss::Error naming the point when (x, y) is outside the raster.
double sample_bathymetry(const Bathymetry& bathy, double x, double y);

/// Reads the ASCII grid format (ncols, nrows, xllcorner, yllcorner, cellsize,
/// nodata_value header; rows north first).
Bathymetry read_ascii_grid(const std::string& path);
Bathymetry parse_ascii_grid(const std::string& text);

/// Point-evaluation callback used to fill cell-centered bathymetry on patches.
using BathymetryField = std::function<double(double x, double y)>;

BathymetryField as_field(Bathymetry bathy);

/// Flat bottom at depth `depth` (B = -depth).
BathymetryField flat_bottom(double depth);

/// Radially symmetric ocean / continental slope / shelf / beach profile about the origin:
/// 3000 m deep to 40 km, linear slope to a 100 m shelf at 80 km, flat shelf to
/// 100 km, then a 1:200 beach crossing sea level at 120 km.
double radial_shelf_profile(double r);
BathymetryField radial_shelf();

}  // namespace bouss
