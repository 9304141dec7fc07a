#include "bouss/linalg/krylov.hpp"

#include <cmath>

#include "bouss/linalg/kernels.hpp"

namespace bouss::linalg {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) { return kernels::active().dot(a.data(), b.data(), a.size()); }
double nrm2(const Vec& a) { return std::sqrt(dot(a, a)); }
void axpy(double a, const Vec& x, Vec& y) { kernels::active().axpy(a, x.data(), y.data(), x.size()); }

Vec residual(const CsrMatrix& A, std::span<const double> b, const Vec& x) {
  Vec r = matvec(A, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

// One BiCGStab cycle from the current x; returns when the recurrence residual
// meets `target` or on breakdown. `its` counts across cycles.
void bicgstab_cycle(const CsrMatrix& A, const Vec& r0, Vec& x, double target, int maxit, const Preconditioner& M,
                    int& its) {
  const std::size_t n = x.size();
  Vec r = r0, rhat = r0, p(n, 0.0), v(n, 0.0), phat(n), s(n), shat(n), t(n);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  while (its < maxit) {
    const double rho_new = dot(rhat, r);
    if (rho_new == 0.0 || !std::isfinite(rho_new)) return;
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    // p = r + beta (p - omega v)
    axpy(-omega, v, p);
    kernels::active().xpby(r.data(), beta, p.data(), n);
    M.apply(p, phat);
    matvec(A, phat, v);
    const double rv = dot(rhat, v);
    if (rv == 0.0) return;
    alpha = rho / rv;
    s = r;
    axpy(-alpha, v, s);
    ++its;
    if (nrm2(s) <= target) {
      axpy(alpha, phat, x);
      return;
    }
    M.apply(s, shat);
    matvec(A, shat, t);
    const double tt = dot(t, t);
    if (tt == 0.0) {
      axpy(alpha, phat, x);
      return;
    }
    omega = dot(t, s) / tt;
    axpy(alpha, phat, x);
    axpy(omega, shat, x);
    r = s;
    axpy(-omega, t, r);
    if (nrm2(r) <= target || omega == 0.0) return;
  }
}

void gmres_cycle(const CsrMatrix& A, const Vec& r0, Vec& x, double target, int maxit, const Preconditioner& M,
                 int& its) {
  constexpr int restart = 30;
  const std::size_t n = x.size();
  const double beta = nrm2(r0);
  if (beta <= target) return;
  std::vector<Vec> V(restart + 1, Vec(n)), Z(restart, Vec(n));
  std::vector<double> H(std::size_t((restart + 1) * restart), 0.0), cs(restart), sn(restart), g(restart + 1, 0.0);
  auto h = [&](int i, int j) -> double& { return H[std::size_t(i * restart + j)]; };
  for (std::size_t i = 0; i < n; ++i) V[0][i] = r0[i] / beta;
  g[0] = beta;
  int k = 0;
  for (; k < restart && its < maxit; ++k) {
    M.apply(V[std::size_t(k)], Z[std::size_t(k)]);
    Vec w = matvec(A, Z[std::size_t(k)]);
    for (int i = 0; i <= k; ++i) {
      h(i, k) = dot(w, V[std::size_t(i)]);
      axpy(-h(i, k), V[std::size_t(i)], w);
    }
    h(k + 1, k) = nrm2(w);
    if (h(k + 1, k) != 0.0)
      for (std::size_t i = 0; i < n; ++i) V[std::size_t(k + 1)][i] = w[i] / h(k + 1, k);
    for (int i = 0; i < k; ++i) {
      const double a = h(i, k), b = h(i + 1, k);
      h(i, k) = cs[std::size_t(i)] * a + sn[std::size_t(i)] * b;
      h(i + 1, k) = -sn[std::size_t(i)] * a + cs[std::size_t(i)] * b;
    }
    const double denom = std::hypot(h(k, k), h(k + 1, k));
    cs[std::size_t(k)] = h(k, k) / denom;
    sn[std::size_t(k)] = h(k + 1, k) / denom;
    h(k, k) = denom;
    h(k + 1, k) = 0.0;
    g[std::size_t(k + 1)] = -sn[std::size_t(k)] * g[std::size_t(k)];
    g[std::size_t(k)] = cs[std::size_t(k)] * g[std::size_t(k)];
    ++its;
    if (std::abs(g[std::size_t(k + 1)]) <= target) {
      ++k;
      break;
    }
  }
  std::vector<double> y(std::size_t(k), 0.0);
  for (int i = k - 1; i >= 0; --i) {
    double s = g[std::size_t(i)];
    for (int j = i + 1; j < k; ++j) s -= h(i, j) * y[std::size_t(j)];
    y[std::size_t(i)] = s / h(i, i);
  }
  for (int i = 0; i < k; ++i) axpy(y[std::size_t(i)], Z[std::size_t(i)], x);
}

}  // namespace

SolveResult solve_krylov(const CsrMatrix& A, std::span<const double> b, std::span<const double> x0, double rtol,
                         int maxit, const Preconditioner& M, KrylovKind kind) {
  const std::size_t n = std::size_t(A.n_rows);
  if (b.size() != n || x0.size() != n) throw Error("solve_krylov: dimension mismatch");
  if (M.size() != A.n_rows) throw Error("solve_krylov: preconditioner size mismatch");

  SolveResult out;
  out.x.assign(x0.begin(), x0.end());
  const Vec bv(b.begin(), b.end());
  const double bnorm = nrm2(bv);
  if (bnorm == 0.0) {
    out.x.assign(n, 0.0);
    out.stats.converged = true;
    return out;
  }
  const double target = rtol * bnorm;
  int its = 0;
  Vec r = residual(A, b, out.x);
  double rnorm = nrm2(r);
  // Restart from the true residual whenever the recurrence claims convergence
  // but the true residual disagrees.
  while (rnorm > target && its < maxit) {
    const int before = its;
    if (kind == KrylovKind::bicgstab) bicgstab_cycle(A, r, out.x, target, maxit, M, its);
    else gmres_cycle(A, r, out.x, target, maxit, M, its);
    r = residual(A, b, out.x);
    rnorm = nrm2(r);
    if (its == before) break;  // breakdown without progress
  }
  out.stats.iterations = its;
  out.stats.relative_residual = rnorm / bnorm;
  out.stats.converged = rnorm <= target;
  if (!out.stats.converged) throw KrylovFailure(out.stats);
  return out;
}

}  // namespace bouss::linalg
