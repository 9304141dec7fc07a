#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bouss/analysis/analysis.hpp"
#include "bouss/core/error.hpp"

namespace bouss::analysis {

void write_transect_csv(std::ostream& out, const std::vector<TransectRow>& rows) {
  out << "s,x,y,eta,h,B,level\n";
  out.precision(17);
  for (const TransectRow& r : rows)
    out << r.s << ',' << r.x << ',' << r.y << ',' << r.eta << ',' << r.h << ',' << r.B << ',' << r.level << '\n';
}

std::vector<TransectRow> read_transect_csv(std::istream& in) {
  std::vector<TransectRow> rows;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line.rfind("s,", 0) == 0) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    TransectRow r;
    if (!(ss >> r.s >> r.x >> r.y >> r.eta >> r.h >> r.B >> r.level))
      throw Error("transect CSV line " + std::to_string(n) + ": expected 7 fields");
    rows.push_back(r);
  }
  return rows;
}

std::vector<TransectRow> read_transect_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open transect file '" + path + "'");
  return read_transect_csv(in);
}

double eta_at(const std::vector<TransectRow>& rows, double s) {
  if (rows.empty()) throw Error("eta_at: empty transect");
  if (s <= rows.front().s) return rows.front().eta;
  if (s >= rows.back().s) return rows.back().eta;
  auto it = std::upper_bound(rows.begin(), rows.end(), s, [](double v, const TransectRow& r) { return v < r.s; });
  const TransectRow& b = *it;
  const TransectRow& a = *(it - 1);
  const double w = (s - a.s) / (b.s - a.s);
  return a.eta + w * (b.eta - a.eta);
}

Crest leading_crest(const std::vector<TransectRow>& rows, double s_lo, double s_hi) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (rows[k].s >= s_lo && rows[k].s <= s_hi) idx.push_back(k);
  if (idx.empty()) throw Error("leading_crest: empty window");
  double emax = -1e300;
  for (std::size_t k : idx) emax = std::max(emax, rows[k].eta);
  std::size_t best = idx.front();
  bool found = false;
  for (std::size_t k : idx) {
    const double e = rows[k].eta;
    if (e < 0.05 * emax) continue;
    const bool left = k == 0 || rows[k - 1].eta <= e;
    const bool right = k + 1 == rows.size() || rows[k + 1].eta < e;
    if (left && right) {
      best = k;
      found = true;
    }
  }
  if (!found)
    for (std::size_t k : idx)
      if (rows[k].eta == emax) best = k;
  Crest c{rows[best].s, rows[best].eta};
  if (best > 0 && best + 1 < rows.size()) {
    // Quadratic through three (possibly unevenly spaced) samples.
    const double x0 = rows[best - 1].s, x1 = rows[best].s, x2 = rows[best + 1].s;
    const double y0 = rows[best - 1].eta, y1 = rows[best].eta, y2 = rows[best + 1].eta;
    const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
    const double a = (d12 - d01) / (x2 - x0);
    if (a < 0) {
      const double b = d01 - a * (x0 + x1);
      const double xs = -b / (2 * a);
      if (xs >= x0 && xs <= x2) {
        c.s = xs;
        c.eta = y0 + d01 * (xs - x0) + a * (xs - x0) * (xs - x1);
      }
    }
  }
  return c;
}

TransectError transect_error(const std::vector<TransectRow>& sim, const std::vector<TransectRow>& ref, double s_lo,
                             double s_hi) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < sim.size(); ++k)
    if (sim[k].s >= s_lo && sim[k].s <= s_hi) idx.push_back(k);
  if (idx.empty()) throw Error("transect_error: empty window");
  TransectError e;
  for (std::size_t m = 0; m < idx.size(); ++m) {
    const TransectRow& r = sim[idx[m]];
    const double d = std::abs(r.eta - eta_at(ref, r.s));
    // Width of the sample's share of the window (midpoint rule).
    const double a = m == 0 ? std::max(s_lo, r.s - (idx.size() > 1 ? 0.5 * (sim[idx[1]].s - r.s) : 0.0))
                            : 0.5 * (sim[idx[m - 1]].s + r.s);
    const double b = m + 1 == idx.size() ? std::min(s_hi, r.s + (m > 0 ? 0.5 * (r.s - sim[idx[m - 1]].s) : 0.0))
                                         : 0.5 * (r.s + sim[idx[m + 1]].s);
    e.l1 += d * std::max(b - a, 0.0);
    e.linf = std::max(e.linf, d);
  }
  const Crest cs = leading_crest(sim, s_lo, s_hi);
  const Crest cr = leading_crest(ref, s_lo, s_hi);
  e.peak_amplitude_error = cr.eta != 0 ? (cs.eta - cr.eta) / cr.eta : 0.0;
  e.peak_location_error = cs.s - cr.s;
  return e;
}

int count_extrema(const std::vector<TransectRow>& rows, double s_max, double threshold) {
  int n = 0;
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
    if (rows[k].s >= s_max || std::abs(rows[k].eta) < threshold) continue;
    const double a = rows[k - 1].eta, b = rows[k].eta, c = rows[k + 1].eta;
    if ((b > a && b >= c) || (b < a && b <= c)) ++n;
  }
  return n;
}

}  // namespace bouss::analysis
