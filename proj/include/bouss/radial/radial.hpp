#pragma once

#include <functional>
#include <vector>

#include "bouss/analysis/analysis.hpp"
#include "bouss/core/config.hpp"

namespace bouss::radial {

/// radial: r > 0 with a reflecting inner face at r = faces[0] and 1/r terms.
/// plane: the same equations without 1/r terms on a periodic line.
enum class Geometry { radial, plane };

enum class OuterBoundary { extrapolation, wall };

struct RadialParams {
  double g = 9.81;
  double alpha = 1.153;
  double h_switch = 5.0;
  double dry_tolerance = 1e-3;
  double sea_level = 0.0;
  double cfl = 0.9;
  bool dispersive = true;  // false: plain shallow water
  OuterBoundary outer = OuterBoundary::extrapolation;  // radial geometry only
};

RadialParams radial_params(const SimConfig& cfg);

/// Cell-centered state on faces[0] < faces[1] < ... ; r[i] is the face midpoint.
struct RadialState {
  std::vector<double> faces, r, dr;
  std::vector<double> h, hu, psi, B;
  double time = 0;

  int size() const { return int(r.size()); }
};

/// Builds a state from faces, bottom elevation B(r) and an initial (eta, u) at r.
/// Cells with ground above eta start dry.
RadialState make_state(std::vector<double> faces, const std::function<double(double)>& bottom,
                       const std::function<std::pair<double, double>(double)>& eta_u);

std::vector<double> uniform_faces(double r_lo, double r_hi, int n);

/// Spacing proportional to sqrt(depth): dr = dr_deep * sqrt(depth / depth_deep),
/// never below dr_min. The last cell ends exactly at r_hi.
std::vector<double> graded_faces(double r_hi, const std::function<double(double)>& depth, double dr_deep,
                                 double depth_deep, double dr_min);

/// Tridiagonal row of 1 + alpha*T at cell i: coefficients of psi[i-1], psi[i], psi[i+1].
/// Boundary neighbors refer to ghost cells (not yet folded). Dry cells give an identity row.
struct OperatorRow {
  double lower = 0, diag = 1, upper = 0;
};
OperatorRow radial_operator_row(const RadialState& s, int i, Geometry geom, const RadialParams& params);

/// Right-hand side per cell (0 in masked cells is applied by the solver, not here).
std::vector<double> radial_rhs(const RadialState& s, Geometry geom, const RadialParams& params);

/// 1 where the dispersive terms are switched off (shallow or dry 3-cell neighborhood).
std::vector<unsigned char> radial_mask(const RadialState& s, Geometry geom, const RadialParams& params);

/// Solves the tridiagonal system for psi (direct elimination) and stores it in s.psi.
void solve_psi(RadialState& s, Geometry geom, const RadialParams& params);

double stable_dt(const RadialState& s, const RadialParams& params);

/// Dispersive solve, momentum source, then a second-order finite-volume shallow
/// water step. Throws StepRejected above Courant number one.
void radial_step(RadialState& s, double dt, const RadialParams& params);
void plane_step(RadialState& s, double dt, const RadialParams& params);

/// Advances to t_end with stable steps; the last step lands on t_end.
void run_to(RadialState& s, Geometry geom, const RadialParams& params, double t_end);

/// 2 pi sum h r dr (radial) or sum h dr (plane).
double radial_mass(const RadialState& s);
double plane_mass(const RadialState& s);

/// Transect rows with s = x = r, y = 0.
std::vector<analysis::TransectRow> to_transect(const RadialState& s, const RadialParams& params);

}  // namespace bouss::radial
