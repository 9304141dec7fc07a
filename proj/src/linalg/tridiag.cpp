#include "bouss/linalg/tridiag.hpp"

#include "bouss/core/error.hpp"

namespace bouss::linalg {

std::vector<double> solve_tridiagonal(std::span<const double> a, std::span<const double> b,
                                      std::span<const double> c, std::span<const double> d) {
  const std::size_t n = b.size();
  if (a.size() != n || c.size() != n || d.size() != n) throw Error("solve_tridiagonal: size mismatch");
  if (n == 0) return {};
  std::vector<double> cp(n), dp(n), x(n);
  cp[0] = c[0] / b[0];
  dp[0] = d[0] / b[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double m = b[i] - a[i] * cp[i - 1];
    if (m == 0.0) throw Error("solve_tridiagonal: zero pivot");
    cp[i] = c[i] / m;
    dp[i] = (d[i] - a[i] * dp[i - 1]) / m;
  }
  x[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
  return x;
}

std::vector<double> solve_cyclic_tridiagonal(std::span<const double> a, std::span<const double> b,
                                             std::span<const double> c, std::span<const double> d) {
  const std::size_t n = b.size();
  if (n < 3) throw Error("solve_cyclic_tridiagonal: need n >= 3");
  const double alpha = c[n - 1];  // couples row n-1 to x[0]
  const double beta = a[0];       // couples row 0 to x[n-1]
  const double gamma = -b[0];
  std::vector<double> bb(b.begin(), b.end());
  bb[0] = b[0] - gamma;
  bb[n - 1] = b[n - 1] - alpha * beta / gamma;
  std::vector<double> x = solve_tridiagonal(a, bb, c, d);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  std::vector<double> z = solve_tridiagonal(a, bb, c, u);
  const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
  for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
  return x;
}

}  // namespace bouss::linalg
