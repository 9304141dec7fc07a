#pragma once

#include <span>
#include <vector>

#include "bouss/core/config.hpp"
#include "bouss/linalg/csr.hpp"

namespace bouss::linalg {

/// Approximate inverse M^-1 of a CsrMatrix. Holds its own copy of whatever it
/// needs, so it stays valid (and reusable) after the matrix it was built from
/// is replaced by a later matrix of the same dimension.
class Preconditioner {
 public:
  Preconditioner() = default;

  PrecondKind kind() const { return kind_; }
  int size() const { return n_; }
  bool empty() const { return n_ == 0; }

  /// z = M^-1 r
  void apply(std::span<const double> r, std::span<double> z) const;

  friend Preconditioner make_preconditioner(const CsrMatrix& A, PrecondKind kind, int components);

 private:
  PrecondKind kind_ = PrecondKind::jacobi;
  int n_ = 0;
  std::vector<double> inv_diag_;  // jacobi
  CsrMatrix lu_;                  // ilu0: unit-lower L and U packed in A's pattern
  std::vector<std::int64_t> diag_pos_;
};

/// Throws bouss::Error naming the row when a diagonal is missing or zero.
/// With components > 1 the unknowns are taken as interleaved blocks
/// (index % components is the component) and ILU(0) factors only the couplings
/// within a component; cross-component entries are left to the Krylov method.
Preconditioner make_preconditioner(const CsrMatrix& A, PrecondKind kind, int components = 1);

}  // namespace bouss::linalg
