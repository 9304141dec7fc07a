#include "bouss/linalg/precond.hpp"

#include <string>

#include "bouss/core/error.hpp"

namespace bouss::linalg {

namespace {

std::vector<std::int64_t> find_diagonal(const CsrMatrix& A) {
  std::vector<std::int64_t> pos(std::size_t(A.n_rows), -1);
  for (int r = 0; r < A.n_rows; ++r) {
    for (auto k = A.row_offsets[std::size_t(r)]; k < A.row_offsets[std::size_t(r) + 1]; ++k)
      if (A.col_indices[std::size_t(k)] == r) pos[std::size_t(r)] = k;
    if (pos[std::size_t(r)] < 0 || A.values[std::size_t(pos[std::size_t(r)])] == 0.0)
      throw Error("preconditioner: zero diagonal in row " + std::to_string(r));
  }
  return pos;
}

CsrMatrix same_component(const CsrMatrix& A, int components) {
  CsrMatrix B;
  B.n_rows = A.n_rows;
  B.row_offsets.assign(1, 0);
  for (int r = 0; r < A.n_rows; ++r) {
    for (auto k = A.row_offsets[std::size_t(r)]; k < A.row_offsets[std::size_t(r) + 1]; ++k) {
      const int c = A.col_indices[std::size_t(k)];
      if (c % components != r % components) continue;
      B.col_indices.push_back(c);
      B.values.push_back(A.values[std::size_t(k)]);
    }
    B.row_offsets.push_back(std::int64_t(B.values.size()));
  }
  return B;
}

}  // namespace

Preconditioner make_preconditioner(const CsrMatrix& A, PrecondKind kind, int components) {
  if (components < 1) throw Error("preconditioner: components must be >= 1");
  Preconditioner P;
  P.kind_ = kind;
  P.n_ = A.n_rows;
  auto diag = find_diagonal(A);
  if (kind == PrecondKind::jacobi) {
    P.inv_diag_.resize(std::size_t(A.n_rows));
    for (int r = 0; r < A.n_rows; ++r) P.inv_diag_[std::size_t(r)] = 1.0 / A.values[std::size_t(diag[std::size_t(r)])];
    return P;
  }

  // ILU(0), IKJ ordering restricted to A's sparsity pattern.
  CsrMatrix lu = components == 1 ? A : same_component(A, components);
  if (components > 1) diag = find_diagonal(lu);
  std::vector<std::int64_t> where(std::size_t(A.n_rows), -1);
  for (int i = 0; i < lu.n_rows; ++i) {
    const auto rb = lu.row_offsets[std::size_t(i)];
    const auto re = lu.row_offsets[std::size_t(i) + 1];
    for (auto k = rb; k < re; ++k) where[std::size_t(lu.col_indices[std::size_t(k)])] = k;
    for (auto k = rb; k < re; ++k) {
      const int col = lu.col_indices[std::size_t(k)];
      if (col >= i) break;
      const double pivot = lu.values[std::size_t(diag[std::size_t(col)])];
      const double factor = lu.values[std::size_t(k)] / pivot;
      lu.values[std::size_t(k)] = factor;
      for (auto m = diag[std::size_t(col)] + 1; m < lu.row_offsets[std::size_t(col) + 1]; ++m) {
        const auto w = where[std::size_t(lu.col_indices[std::size_t(m)])];
        if (w >= 0) lu.values[std::size_t(w)] -= factor * lu.values[std::size_t(m)];
      }
    }
    for (auto k = rb; k < re; ++k) where[std::size_t(lu.col_indices[std::size_t(k)])] = -1;
    if (lu.values[std::size_t(diag[std::size_t(i)])] == 0.0)
      throw Error("preconditioner: zero pivot in ILU(0) at row " + std::to_string(i));
  }
  P.lu_ = std::move(lu);
  P.diag_pos_ = std::move(diag);
  return P;
}

void Preconditioner::apply(std::span<const double> r, std::span<double> z) const {
  if (r.size() != std::size_t(n_) || z.size() != std::size_t(n_))
    throw Error("preconditioner: dimension mismatch");
  if (kind_ == PrecondKind::jacobi) {
    for (int i = 0; i < n_; ++i) z[std::size_t(i)] = r[std::size_t(i)] * inv_diag_[std::size_t(i)];
    return;
  }
  // L y = r (unit diagonal)
  for (int i = 0; i < n_; ++i) {
    double s = r[std::size_t(i)];
    for (auto k = lu_.row_offsets[std::size_t(i)]; k < diag_pos_[std::size_t(i)]; ++k)
      s -= lu_.values[std::size_t(k)] * z[std::size_t(lu_.col_indices[std::size_t(k)])];
    z[std::size_t(i)] = s;
  }
  // U z = y
  for (int i = n_ - 1; i >= 0; --i) {
    double s = z[std::size_t(i)];
    for (auto k = diag_pos_[std::size_t(i)] + 1; k < lu_.row_offsets[std::size_t(i) + 1]; ++k)
      s -= lu_.values[std::size_t(k)] * z[std::size_t(lu_.col_indices[std::size_t(k)])];
    z[std::size_t(i)] = s / lu_.values[std::size_t(diag_pos_[std::size_t(i)])];
  }
}

}  // namespace bouss::linalg
