#include "bouss/linalg/kernels.hpp"

namespace bouss::linalg::kernels {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void xpby_scalar(const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

void csr_matvec_scalar(std::size_t n_rows, const std::int64_t* row_offsets, const std::int32_t* cols,
                       const double* vals, const double* x, double* y) {
  for (std::size_t r = 0; r < n_rows; ++r) {
    double s = 0.0;
    for (std::int64_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) s += vals[k] * x[cols[k]];
    y[r] = s;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{Isa::scalar, dot_scalar, axpy_scalar, xpby_scalar, csr_matvec_scalar};
  return t;
}

}  // namespace bouss::linalg::kernels
