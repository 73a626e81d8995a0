// AVX2/FMA variants of the coefficient-array kernels.  This translation unit
// is compiled with -mavx2 -mfma on x86-64 and selected at runtime only when
// the CPU reports AVX2.

#include "cliffcalc/simd.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace cliff::kern {

namespace {

// In the geometric product out[i] += sign_out[j][i] * a[i^j] * b[j], the map
// i -> i^j permutes 4-lane blocks: the block base is (i & ~3) ^ (j & ~3) and
// lanes inside it are shuffled by j & 3.
inline __m256d xor_lane_permute(__m256d v, std::size_t lowbits) {
  switch (lowbits) {
    case 1: return _mm256_permute_pd(v, 0b0101);                 // [1 0 3 2]
    case 2: return _mm256_permute2f128_pd(v, v, 0x01);           // [2 3 0 1]
    case 3: return _mm256_permute_pd(_mm256_permute2f128_pd(v, v, 0x01), 0b0101);  // [3 2 1 0]
    default: return v;
  }
}

void product_avx2(const double* a, const double* b, const double* sign_out,
                  std::size_t dim, double* out) {
  for (std::size_t j = 0; j < dim; ++j) {
    const double bj = b[j];
    if (bj == 0.0) continue;
    const __m256d vb = _mm256_set1_pd(bj);
    const double* sg = sign_out + j * dim;
    const std::size_t jhi = j & ~std::size_t{3};
    const std::size_t jlo = j & std::size_t{3};
    for (std::size_t i = 0; i < dim; i += 4) {
      __m256d va = _mm256_loadu_pd(a + (i ^ jhi));
      va = xor_lane_permute(va, jlo);
      const __m256d vs = _mm256_loadu_pd(sg + i);
      __m256d vo = _mm256_loadu_pd(out + i);
      vo = _mm256_fmadd_pd(_mm256_mul_pd(vs, va), vb, vo);
      _mm256_storeu_pd(out + i, vo);
    }
  }
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t count) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < count; ++i) y[i] += alpha * x[i];
}

void scale_avx2(double alpha, double* x, std::size_t count) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < count; ++i) x[i] *= alpha;
}

double dot_avx2(const double* x, const double* y, std::size_t count) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < count; ++i) s += x[i] * y[i];
  return s;
}

const Kernels avx2_impl{product_avx2, axpy_avx2, scale_avx2, dot_avx2, "avx2"};

}  // namespace

const Kernels* avx2_kernels() { return &avx2_impl; }

}  // namespace cliff::kern

#else

namespace cliff::kern {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace cliff::kern

#endif
