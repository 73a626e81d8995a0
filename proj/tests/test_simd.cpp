#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "cliffcalc/algebra.hpp"
#include "cliffcalc/simd.hpp"

using namespace cliff;

namespace {

std::vector<double> random_array(std::size_t count, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(count);
  for (double& t : v) t = g(rng);
  return v;
}

double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0, den = 1e-300;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / den;
}

}  // namespace

TEST_CASE("scalar and AVX2 product kernels agree") {
  const kern::Kernels* avx2 = kern::avx2_kernels();
  if (!avx2 || !kern::force("avx2")) {
    MESSAGE("AVX2 unavailable on this host; scalar path is the only variant");
    return;
  }
  kern::force("scalar");

  std::mt19937_64 rng(42);
  for (int n : {3, 5, 7, 9}) {
    const Algebra& alg = Algebra::get(n);
    const std::size_t dim = alg.dim();
    for (int t = 0; t < 20; ++t) {
      const auto a = random_array(dim, rng);
      const auto b = random_array(dim, rng);
      std::vector<double> out_s(dim, 0.0), out_v(dim, 0.0);
      kern::scalar_kernels.product(a.data(), b.data(), alg.sign_out_row(0), dim, out_s.data());
      avx2->product(a.data(), b.data(), alg.sign_out_row(0), dim, out_v.data());
      CHECK(rel_diff(out_v, out_s) < 1e-13);
    }
  }
}

TEST_CASE("scalar and AVX2 axpy/scale/dot agree") {
  const kern::Kernels* avx2 = kern::avx2_kernels();
  if (!avx2) return;
  std::mt19937_64 rng(43);
  for (std::size_t count : {8u, 32u, 129u, 1000u}) {
    const auto x = random_array(count, rng);
    auto y1 = random_array(count, rng);
    auto y2 = y1;
    kern::scalar_kernels.axpy(0.37, x.data(), y1.data(), count);
    avx2->axpy(0.37, x.data(), y2.data(), count);
    CHECK(rel_diff(y2, y1) < 1e-13);

    kern::scalar_kernels.scale(-1.7, y1.data(), count);
    avx2->scale(-1.7, y2.data(), count);
    CHECK(rel_diff(y2, y1) < 1e-13);

    const double d1 = kern::scalar_kernels.dot(x.data(), y1.data(), count);
    const double d2 = avx2->dot(x.data(), y2.data(), count);
    CHECK(std::abs(d1 - d2) / std::max(1.0, std::abs(d1)) < 1e-12);
  }
}

TEST_CASE("full multivector products agree across dispatched kernels") {
  if (!kern::force("avx2")) {
    kern::force("scalar");
    return;
  }
  std::mt19937_64 rng(44);
  std::normal_distribution<double> g;
  for (int n : {3, 7, 9}) {
    const Algebra& alg = Algebra::get(n);
    for (int t = 0; t < 10; ++t) {
      Multivector a(alg), b(alg);
      for (std::size_t k = 0; k < alg.dim(); ++k) {
        a[k] = g(rng);
        b[k] = g(rng);
      }
      kern::force("avx2");
      const Multivector p1 = mv_mul(a, b);
      kern::force("scalar");
      const Multivector p2 = mv_mul(a, b);
      CHECK((p1 - p2).norm() / std::max(1.0, p2.norm()) < 1e-13);
    }
  }
  kern::force("avx2");
}

TEST_CASE("dispatch reports an active implementation") {
  CHECK(kern::active().product != nullptr);
  CHECK((std::string(kern::active().name) == "scalar" ||
         std::string(kern::active().name) == "avx2"));
  CHECK(!kern::force("neon"));
}
