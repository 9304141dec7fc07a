#pragma once

#include <span>
#include <vector>

#include "bouss/core/config.hpp"
#include "bouss/core/error.hpp"
#include "bouss/linalg/csr.hpp"
#include "bouss/linalg/precond.hpp"

namespace bouss::linalg {

struct SolverStats {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  bool preconditioner_reused = false;
};

struct SolveResult {
  std::vector<double> x;
  SolverStats stats;
};

/// Thrown when the iteration limit is reached without meeting the tolerance.
class KrylovFailure : public Error {
 public:
  explicit KrylovFailure(const SolverStats& s)
      : Error("Krylov solver did not converge: " + std::to_string(s.iterations) +
              " iterations, relative residual " + std::to_string(s.relative_residual)),
        stats_(s) {}
  const SolverStats& stats() const { return stats_; }

 private:
  SolverStats stats_;
};

/// Right-preconditioned Krylov solve of A x = b. On success the true residual
/// satisfies ||b - A x|| <= rtol ||b||; b = 0 returns x = 0 after 0 iterations.
/// GMRES uses a restart length of 30.
SolveResult solve_krylov(const CsrMatrix& A, std::span<const double> b, std::span<const double> x0, double rtol,
                         int maxit, const Preconditioner& M, KrylovKind kind = KrylovKind::bicgstab);

}  // namespace bouss::linalg
