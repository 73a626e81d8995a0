#pragma once

#include <cstddef>

namespace cliff::kern {

/// Dense geometric-product accumulation over bitmask-indexed coefficient
/// arrays: out[i] += sign_out[j*dim + i] * a[i^j] * b[j] for all i, j.
/// `out` must not alias `a` or `b`.  dim is a power of two >= 8.
using product_fn = void (*)(const double* a, const double* b, const double* sign_out,
                            std::size_t dim, double* out);
/// y[i] += alpha * x[i]
using axpy_fn = void (*)(double alpha, const double* x, double* y, std::size_t count);
/// x[i] *= alpha
using scale_fn = void (*)(double alpha, double* x, std::size_t count);
/// sum x[i]*y[i]
using dot_fn = double (*)(const double* x, const double* y, std::size_t count);

struct Kernels {
  product_fn product;
  axpy_fn axpy;
  scale_fn scale;
  dot_fn dot;
  const char* name;
};

/// Scalar reference implementations.
extern const Kernels scalar_kernels;

/// AVX2/FMA implementations; null product pointer when unsupported at build
/// time (non-x86 targets).
const Kernels* avx2_kernels();

/// The runtime-selected implementation (AVX2 when the CPU supports it,
/// scalar otherwise; override with CLIFFCALC_KERNELS=scalar|avx2).
const Kernels& active();

/// Force a specific implementation ("scalar" or "avx2"); used by the
/// equivalence tests.  Returns false if unavailable.
bool force(const char* name);

}  // namespace cliff::kern
