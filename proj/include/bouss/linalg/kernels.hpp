#pragma once

// Data-parallel inner loops of the Krylov solvers. Each kernel has a scalar
// reference implementation and an AVX2 variant; the variant is chosen once at
// startup from CPUID and can be pinned with BOUSS_SIMD=scalar|avx2.
//
// Equivalence contract between variants:
//   axpy, xpby, csr_matvec   bit-identical (same per-element operation order;
//                            matvec keeps ascending-column summation per row)
//   dot, nrm2                equal up to reassociation, |diff| <= n*eps*sum|x_i y_i|

#include <cstddef>
#include <cstdint>

namespace bouss::linalg::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = x + b * y
  void (*xpby)(const double* x, double b, double* y, std::size_t n);
  // y = A x for CSR storage
  void (*csr_matvec)(std::size_t n_rows, const std::int64_t* row_offsets, const std::int32_t* cols,
                     const double* vals, const double* x, double* y);
};

const KernelTable& scalar_table();
const KernelTable& avx2_table();

bool isa_available(Isa isa);

/// The table used by the solvers.
const KernelTable& active();

/// Overrides the runtime choice. Throws if the ISA is unavailable on this CPU.
void select(Isa isa);

const char* name(Isa isa);

}  // namespace bouss::linalg::kernels
