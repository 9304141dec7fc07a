#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bouss::analysis {

enum class Model { airy, sgn, ms, swe };

std::string to_string(Model m);

struct DispersionQuery {
  Model model = Model::airy;
  double k = 0;   // 1/m
  double h0 = 0;  // m
  double g = 9.81;
  double alpha = 1.153;  // sgn only
  double beta = 0.0;     // ms only
};

/// Angular frequency; throws bouss::Error unless k > 0 and h0 > 0.
double omega(const DispersionQuery& q);

/// d(omega)/dk by centered differences with relative step 1e-6.
double group_velocity(const DispersionQuery& q);
double scaled_group_velocity(const DispersionQuery& q);  // divided by sqrt(g h0)

struct DispersionRow {
  double kh0;
  Model model;
  double omega;
  double scaled_group_velocity;
};

/// Log-spaced kh0 samples in [kh_min, kh_max], four models per sample.
std::vector<DispersionRow> dispersion_table(double h0, double g, double alpha, double beta, double kh_min,
                                            double kh_max, int n);
void write_dispersion_csv(std::ostream& out, const std::vector<DispersionRow>& rows);

// ---- transects -------------------------------------------------------------------

struct TransectRow {
  double s = 0, x = 0, y = 0, eta = 0, h = 0, B = 0;
  int level = 1;
};

void write_transect_csv(std::ostream& out, const std::vector<TransectRow>& rows);
std::vector<TransectRow> read_transect_csv(std::istream& in);
std::vector<TransectRow> read_transect_csv(const std::string& path);

/// Linear interpolation of eta at s; clamps outside the sampled range.
double eta_at(const std::vector<TransectRow>& rows, double s);

struct Crest {
  double s;
  double eta;
};

/// Leading crest: the largest-s local maximum with eta >= 0.05 * max eta over
/// [s_lo, s_hi], refined by a quadratic through the neighbors.
Crest leading_crest(const std::vector<TransectRow>& rows, double s_lo, double s_hi);

struct TransectError {
  double l1 = 0;    // integral of |eta_sim - eta_ref| ds over the window
  double linf = 0;  // max |eta_sim - eta_ref|
  double peak_amplitude_error = 0;  // (A_sim - A_ref) / A_ref
  double peak_location_error = 0;   // s_sim - s_ref
};

/// Reference resampled onto the simulated abscissa inside [s_lo, s_hi].
TransectError transect_error(const std::vector<TransectRow>& sim, const std::vector<TransectRow>& ref, double s_lo,
                             double s_hi);

/// Local extrema with s < s_max and |eta| >= threshold.
int count_extrema(const std::vector<TransectRow>& rows, double s_max, double threshold);

// ---- phase speed -------------------------------------------------------------------

struct LineFrame {
  double t = 0;
  double x0 = 0;  // first sample position
  double dx = 1;
  std::vector<double> eta;
};

/// Tracks one crest through the frames (quadratic peak interpolation, periodic
/// unwrapping) and returns the least-squares slope of position versus time.
/// Throws bouss::Error with fewer than 3 frames.
double measure_phase_speed(const std::vector<LineFrame>& frames, double k);

}  // namespace bouss::analysis
