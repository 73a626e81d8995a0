#include "cliffcalc/simd.hpp"

namespace cliff::kern {

namespace {

void product_scalar(const double* a, const double* b, const double* sign_out,
                    std::size_t dim, double* out) {
  for (std::size_t j = 0; j < dim; ++j) {
    const double bj = b[j];
    if (bj == 0.0) continue;
    const double* sg = sign_out + j * dim;
    for (std::size_t i = 0; i < dim; ++i)
      out[i] += sg[i] * a[i ^ j] * bj;
  }
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) x[i] *= alpha;
}

double dot_scalar(const double* x, const double* y, std::size_t count) {
  double s = 0;
  for (std::size_t i = 0; i < count; ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

const Kernels scalar_kernels{product_scalar, axpy_scalar, scale_scalar, dot_scalar, "scalar"};

}  // namespace cliff::kern
