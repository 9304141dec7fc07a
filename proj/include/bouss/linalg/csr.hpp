#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace bouss::linalg {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Square compressed-sparse-row matrix. Columns within a row are strictly increasing.
struct CsrMatrix {
  int n_rows = 0;
  std::vector<std::int64_t> row_offsets{0};
  std::vector<std::int32_t> col_indices;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
  /// Entry (r, c) or 0 when not stored.
  double at(int r, int c) const;
};

/// Sums duplicate (row, col) entries and sorts each row by column.
CsrMatrix csr_from_entries(int n_rows, std::span<const Triplet> entries);

/// y = A x with per-row summation in ascending column order.
std::vector<double> matvec(const CsrMatrix& A, std::span<const double> x);
void matvec(const CsrMatrix& A, std::span<const double> x, std::span<double> y);

/// MatrixMarket coordinate (real general) text.
void write_matrix_market(std::ostream& out, const CsrMatrix& A);

}  // namespace bouss::linalg
