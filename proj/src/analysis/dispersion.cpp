#include <cmath>
#include <ostream>

#include "bouss/analysis/analysis.hpp"
#include "bouss/core/error.hpp"

namespace bouss::analysis {

std::string to_string(Model m) {
  switch (m) {
    case Model::airy: return "airy";
    case Model::sgn: return "sgn";
    case Model::ms: return "ms";
    case Model::swe: return "swe";
  }
  return "?";
}

double omega(const DispersionQuery& q) {
  if (!(q.k > 0) || !(q.h0 > 0)) throw Error("omega: need k > 0 and h0 > 0");
  const double kh = q.k * q.h0;
  const double c0 = std::sqrt(q.g * q.h0);
  switch (q.model) {
    case Model::airy: return q.k * c0 * std::sqrt(std::tanh(kh) / kh);
    case Model::sgn: {
      const double kh2 = kh * kh / 3.0;
      return q.k * c0 * std::sqrt((1 + (q.alpha - 1) * kh2) / (1 + q.alpha * kh2));
    }
    case Model::ms: {
      // Written in kh^2/3 so beta = 0 matches sgn with alpha = 1 bit for bit.
      const double kh2 = kh * kh / 3.0;
      return q.k * c0 * std::sqrt((1 + 3 * q.beta * kh2) / (1 + (3 * q.beta + 1) * kh2));
    }
    case Model::swe: return q.k * c0;
  }
  return 0;
}

double group_velocity(const DispersionQuery& q) {
  const double dk = 1e-6 * q.k;
  DispersionQuery a = q, b = q;
  a.k = q.k + dk;
  b.k = q.k - dk;
  return (omega(a) - omega(b)) / (2 * dk);
}

double scaled_group_velocity(const DispersionQuery& q) { return group_velocity(q) / std::sqrt(q.g * q.h0); }

std::vector<DispersionRow> dispersion_table(double h0, double g, double alpha, double beta, double kh_min,
                                            double kh_max, int n) {
  if (!(kh_min > 0) || !(kh_max > kh_min) || n < 2) throw Error("dispersion_table: invalid kh0 range");
  if (!(h0 > 0)) throw Error("dispersion_table: h0 must be positive");
  std::vector<DispersionRow> rows;
  const double la = std::log(kh_min), lb = std::log(kh_max);
  for (int m = 0; m < n; ++m) {
    const double kh = m == n - 1 ? kh_max : std::exp(la + (lb - la) * m / (n - 1));
    for (Model mod : {Model::airy, Model::sgn, Model::ms, Model::swe}) {
      const DispersionQuery q{mod, kh / h0, h0, g, alpha, beta};
      rows.push_back({kh, mod, omega(q), scaled_group_velocity(q)});
    }
  }
  return rows;
}

void write_dispersion_csv(std::ostream& out, const std::vector<DispersionRow>& rows) {
  out << "kh0,model,omega,scaled_group_velocity\n";
  out.precision(17);
  for (const DispersionRow& r : rows)
    out << r.kh0 << ',' << to_string(r.model) << ',' << r.omega << ',' << r.scaled_group_velocity << '\n';
}

}  // namespace bouss::analysis
