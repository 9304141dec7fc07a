#include <algorithm>

#include "bouss/linalg/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define BOUSS_HAVE_X86 1
#else
#define BOUSS_HAVE_X86 0
#endif

namespace bouss::linalg::kernels {

#if BOUSS_HAVE_X86

namespace {

__attribute__((target("avx2"))) double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

__attribute__((target("avx2"))) void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

__attribute__((target("avx2"))) void xpby_avx2(const double* x, double b, double* y, std::size_t n) {
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_mul_pd(vb, _mm256_loadu_pd(y + i))));
  for (; i < n; ++i) y[i] = x[i] + b * y[i];
}

// Four rows per block, one row per lane. Each lane walks its own row in
// ascending column order, so every row sum is formed exactly as in the scalar
// kernel; lanes whose row is exhausted keep their accumulator via blend.
__attribute__((target("avx2"))) void csr_matvec_avx2(std::size_t n_rows, const std::int64_t* row_offsets,
                                                     const std::int32_t* cols, const double* vals,
                                                     const double* x, double* y) {
  std::size_t r = 0;
  for (; r + 4 <= n_rows; r += 4) {
    const __m256i start = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row_offsets + r));
    const __m256i stop = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row_offsets + r + 1));
    const __m256i len = _mm256_sub_epi64(stop, start);
    std::int64_t max_len = 0;
    for (int k = 0; k < 4; ++k) max_len = std::max(max_len, row_offsets[r + k + 1] - row_offsets[r + k]);

    __m256d acc = _mm256_setzero_pd();
    for (std::int64_t t = 0; t < max_len; ++t) {
      const __m256i vt = _mm256_set1_epi64x(t);
      const __m256i active = _mm256_cmpgt_epi64(len, vt);
      const __m256d mask = _mm256_castsi256_pd(active);
      const __m256i idx = _mm256_add_epi64(start, vt);
      const __m256d v = _mm256_mask_i64gather_pd(_mm256_setzero_pd(), vals, idx, mask, 8);
      // Pack the 64-bit lane mask down to 32-bit lanes for the column gather.
      const __m128i mask32 = _mm256_castsi256_si128(
          _mm256_permutevar8x32_epi32(active, _mm256_setr_epi32(0, 2, 4, 6, 0, 2, 4, 6)));
      const __m128i c = _mm256_mask_i64gather_epi32(_mm_setzero_si128(), cols, idx, mask32, 4);
      const __m256d xv = _mm256_mask_i32gather_pd(_mm256_setzero_pd(), x, c, mask, 8);
      acc = _mm256_blendv_pd(acc, _mm256_add_pd(acc, _mm256_mul_pd(v, xv)), mask);
    }
    _mm256_storeu_pd(y + r, acc);
  }
  for (; r < n_rows; ++r) {
    double s = 0.0;
    for (std::int64_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) s += vals[k] * x[cols[k]];
    y[r] = s;
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{Isa::avx2, dot_avx2, axpy_avx2, xpby_avx2, csr_matvec_avx2};
  return t;
}

bool avx2_supported() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
}

#else

const KernelTable& avx2_table() { return scalar_table(); }
bool avx2_supported() { return false; }

#endif

}  // namespace bouss::linalg::kernels
