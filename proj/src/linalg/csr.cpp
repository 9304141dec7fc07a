#include "bouss/linalg/csr.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "bouss/core/error.hpp"
#include "bouss/linalg/kernels.hpp"

namespace bouss::linalg {

double CsrMatrix::at(int r, int c) const {
  const auto b = col_indices.begin() + row_offsets[r];
  const auto e = col_indices.begin() + row_offsets[r + 1];
  auto it = std::lower_bound(b, e, c);
  if (it == e || *it != c) return 0.0;
  return values[std::size_t(it - col_indices.begin())];
}

CsrMatrix csr_from_entries(int n_rows, std::span<const Triplet> entries) {
  if (n_rows < 0) throw Error("csr_from_entries: negative size");
  std::vector<std::int64_t> counts(std::size_t(n_rows) + 1, 0);
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_rows)
      throw Error("csr_from_entries: entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                  ") out of range for n=" + std::to_string(n_rows));
    ++counts[std::size_t(t.row) + 1];
  }
  for (int r = 0; r < n_rows; ++r) counts[std::size_t(r) + 1] += counts[std::size_t(r)];

  // Bucket by row, stable in input order so duplicate sums are deterministic.
  std::vector<std::pair<int, double>> bucket(entries.size());
  std::vector<std::int64_t> fill(counts.begin(), counts.end() - 1);
  for (const auto& t : entries) bucket[std::size_t(fill[std::size_t(t.row)]++)] = {t.col, t.value};

  CsrMatrix A;
  A.n_rows = n_rows;
  A.row_offsets.assign(std::size_t(n_rows) + 1, 0);
  A.col_indices.reserve(entries.size());
  A.values.reserve(entries.size());
  for (int r = 0; r < n_rows; ++r) {
    auto b = bucket.begin() + counts[std::size_t(r)];
    auto e = bucket.begin() + counts[std::size_t(r) + 1];
    std::stable_sort(b, e, [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto it = b; it != e; ++it) {
      if (!A.col_indices.empty() && std::int64_t(A.col_indices.size()) > A.row_offsets[std::size_t(r)] &&
          A.col_indices.back() == it->first) {
        A.values.back() += it->second;
      } else {
        A.col_indices.push_back(it->first);
        A.values.push_back(it->second);
      }
    }
    A.row_offsets[std::size_t(r) + 1] = std::int64_t(A.col_indices.size());
  }
  return A;
}

void matvec(const CsrMatrix& A, std::span<const double> x, std::span<double> y) {
  if (x.size() != std::size_t(A.n_rows) || y.size() != std::size_t(A.n_rows))
    throw Error("matvec: dimension mismatch (n=" + std::to_string(A.n_rows) + ", x=" +
                std::to_string(x.size()) + ")");
  kernels::active().csr_matvec(std::size_t(A.n_rows), A.row_offsets.data(), A.col_indices.data(),
                               A.values.data(), x.data(), y.data());
}

std::vector<double> matvec(const CsrMatrix& A, std::span<const double> x) {
  std::vector<double> y(std::size_t(A.n_rows));
  matvec(A, x, y);
  return y;
}

void write_matrix_market(std::ostream& out, const CsrMatrix& A) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.n_rows << " " << A.n_rows << " " << A.nnz() << "\n";
  out.precision(17);
  for (int r = 0; r < A.n_rows; ++r)
    for (auto k = A.row_offsets[std::size_t(r)]; k < A.row_offsets[std::size_t(r) + 1]; ++k)
      out << r + 1 << " " << A.col_indices[std::size_t(k)] + 1 << " " << A.values[std::size_t(k)] << "\n";
}

}  // namespace bouss::linalg
