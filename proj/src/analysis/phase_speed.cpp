#include <algorithm>
#include <cmath>
#include <numbers>

#include "bouss/analysis/analysis.hpp"
#include "bouss/core/error.hpp"

namespace bouss::analysis {

namespace {

// Sub-sample peak offset in [-0.5, 0.5] from a parabola through three samples.
double peak_offset(double a, double b, double c) {
  const double den = a - 2 * b + c;
  if (den >= 0) return 0.0;
  const double o = 0.5 * (a - c) / den;
  return std::clamp(o, -0.5, 0.5);
}

}  // namespace

double measure_phase_speed(const std::vector<LineFrame>& frames, double k) {
  if (frames.size() < 3) throw Error("measure_phase_speed: need at least 3 frames");
  if (!(k > 0)) throw Error("measure_phase_speed: k must be positive");
  const double half = std::numbers::pi / k;
  std::vector<double> pos, t;
  double prev = 0;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const LineFrame& F = frames[f];
    const int n = int(F.eta.size());
    if (n < 3) throw Error("measure_phase_speed: frame too short");
    const double L = n * F.dx;
    auto at = [&](int i) { return F.eta[std::size_t(((i % n) + n) % n)]; };
    int best = -1;
    double best_val = -1e300;
    for (int i = 0; i < n; ++i) {
      const double x = F.x0 + i * F.dx;
      if (f > 0) {
        double d = std::fmod(x - prev, L);
        if (d > 0.5 * L) d -= L;
        if (d < -0.5 * L) d += L;
        if (std::abs(d) >= half) continue;
      }
      if (at(i) > best_val) {
        best_val = at(i);
        best = i;
      }
    }
    if (best < 0) throw Error("measure_phase_speed: crest lost");
    double x = F.x0 + (best + peak_offset(at(best - 1), at(best), at(best + 1))) * F.dx;
    if (f > 0) {
      // Unwrap onto the branch nearest the previous crest.
      x += L * std::round((prev - x) / L);
    }
    prev = x;
    pos.push_back(x);
    t.push_back(F.t);
  }
  double tm = 0, xm = 0;
  for (std::size_t m = 0; m < t.size(); ++m) {
    tm += t[m];
    xm += pos[m];
  }
  tm /= double(t.size());
  xm /= double(t.size());
  double num = 0, den = 0;
  for (std::size_t m = 0; m < t.size(); ++m) {
    num += (t[m] - tm) * (pos[m] - xm);
    den += (t[m] - tm) * (t[m] - tm);
  }
  if (den == 0) throw Error("measure_phase_speed: frames share one time");
  return num / den;
}

}  // namespace bouss::analysis
