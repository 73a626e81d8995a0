#include "cliffcalc/algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numeric>

#include "cliffcalc/simd.hpp"

namespace cliff {

namespace {

// Reordering sign of e_a e_b: bits of a above bit i hop over each set bit i
// of b; each shared index then contributes e_i e_i = -1.
int blade_sign(std::size_t a, std::size_t b, int n) {
  int swaps = 0;
  for (int i = 0; i < n; ++i) {
    if (b & (std::size_t{1} << i))
      swaps += std::popcount(a >> (i + 1));
  }
  int minus = swaps + std::popcount(a & b);
  return (minus % 2 == 0) ? 1 : -1;
}

}  // namespace

Algebra::Algebra(int n) : n_(n), dim_(std::size_t{1} << n) {
  if (n < 3 || n > 9 || n % 2 == 0)
    throw std::invalid_argument("Algebra: n must be odd, 3 <= n <= 9");
  sign_.resize(dim_ * dim_);
  sign_out_.resize(dim_ * dim_);
  grade_.resize(dim_);
  for (std::size_t a = 0; a < dim_; ++a) {
    grade_[a] = std::popcount(a);
    for (std::size_t b = 0; b < dim_; ++b)
      sign_[a * dim_ + b] = static_cast<double>(blade_sign(a, b, n));
  }
  for (std::size_t j = 0; j < dim_; ++j)
    for (std::size_t i = 0; i < dim_; ++i)
      sign_out_[j * dim_ + i] = sign_[(i ^ j) * dim_ + j];

  canon_to_mask_.resize(dim_);
  std::iota(canon_to_mask_.begin(), canon_to_mask_.end(), std::size_t{0});
  // (grade, lexicographic-on-sorted-index-lists).  For masks of equal grade
  // the lex order of index lists coincides with numeric order of the
  // bit-reversed mask; comparing the lowest set bits directly is simplest.
  std::sort(canon_to_mask_.begin(), canon_to_mask_.end(), [this](std::size_t a, std::size_t b) {
    if (grade_[a] != grade_[b]) return grade_[a] < grade_[b];
    std::size_t x = a, y = b;
    while (x && y) {
      int i = std::countr_zero(x), j = std::countr_zero(y);
      if (i != j) return i < j;
      x &= x - 1;
      y &= y - 1;
    }
    return false;
  });
  mask_to_canon_.resize(dim_);
  for (std::size_t p = 0; p < dim_; ++p) mask_to_canon_[canon_to_mask_[p]] = p;
}

const Algebra& Algebra::get(int n) {
  static std::mutex m;
  static std::array<const Algebra*, 10> cache{};
  std::lock_guard<std::mutex> lock(m);
  if (n < 3 || n > 9 || n % 2 == 0)
    throw std::invalid_argument("Algebra::get: n must be odd, 3 <= n <= 9");
  if (!cache[n]) cache[n] = new Algebra(n);
  return *cache[n];
}

Multivector::Multivector(const Algebra& alg, std::vector<double> coeffs)
    : alg_(&alg), c_(std::move(coeffs)) {
  if (c_.size() != alg.dim())
    throw std::invalid_argument("Multivector: coefficient count != 2^n");
}

Multivector Multivector::scalar(const Algebra& alg, double v) {
  Multivector m(alg);
  m.c_[0] = v;
  return m;
}

Multivector Multivector::basis_vector(const Algebra& alg, int i) {
  if (i < 1 || i > alg.n()) throw std::invalid_argument("basis_vector: index out of range");
  Multivector m(alg);
  m.c_[std::size_t{1} << (i - 1)] = 1.0;
  return m;
}

double Multivector::norm() const {
  return std::sqrt(kern::active().dot(c_.data(), c_.data(), c_.size()));
}

Multivector& Multivector::operator+=(const Multivector& o) {
  require_same_algebra(*alg_, *o.alg_, "operator+");
  kern::active().axpy(1.0, o.c_.data(), c_.data(), c_.size());
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& o) {
  require_same_algebra(*alg_, *o.alg_, "operator-");
  kern::active().axpy(-1.0, o.c_.data(), c_.data(), c_.size());
  return *this;
}

Multivector& Multivector::operator*=(double k) {
  kern::active().scale(k, c_.data(), c_.size());
  return *this;
}

std::size_t Multivector::nonzero_count() const {
  std::size_t k = 0;
  for (double v : c_)
    if (v != 0.0) ++k;
  return k;
}

Multivector mv_mul(const Multivector& a, const Multivector& b) {
  require_same_algebra(a.algebra(), b.algebra(), "mv_mul");
  const Algebra& alg = a.algebra();
  const std::size_t dim = alg.dim();
  Multivector out(alg);

  const std::size_t nnz_a = a.nonzero_count();
  const std::size_t nnz_b = b.nonzero_count();
  // Sparse index loop when it clearly beats dim*nnz_b table traffic.
  if (nnz_a * nnz_b * 4 < dim * std::max<std::size_t>(nnz_b, 1)) {
    for (std::size_t i = 0; i < dim; ++i) {
      const double ai = a[i];
      if (ai == 0.0) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        const double bj = b[j];
        if (bj == 0.0) continue;
        out[i ^ j] += alg.sign(i, j) * ai * bj;
      }
    }
    return out;
  }

  kern::active().product(a.data(), b.data(), alg.sign_out_row(0), dim, out.data());
  return out;
}

std::vector<double> Multivector::to_canonical() const {
  std::vector<double> out(c_.size());
  for (std::size_t p = 0; p < c_.size(); ++p) out[p] = c_[alg_->canonical_to_mask(p)];
  return out;
}

Multivector Multivector::from_canonical(const Algebra& alg, std::span<const double> coeffs) {
  if (coeffs.size() != alg.dim())
    throw std::invalid_argument("from_canonical: coefficient count != 2^n");
  Multivector m(alg);
  for (std::size_t p = 0; p < coeffs.size(); ++p) m[alg.canonical_to_mask(p)] = coeffs[p];
  return m;
}

Paravector::Paravector(const Algebra& alg, double x0, std::vector<double> vec)
    : alg_(&alg), x0_(x0), vec_(std::move(vec)) {
  if (static_cast<int>(vec_.size()) != alg.n())
    throw std::invalid_argument("Paravector: vector part must have n entries");
}

Paravector Paravector::zero(const Algebra& alg) {
  return Paravector(alg, 0.0, std::vector<double>(alg.n(), 0.0));
}

Paravector Paravector::real(const Algebra& alg, double x0) {
  return Paravector(alg, x0, std::vector<double>(alg.n(), 0.0));
}

double Paravector::vec_norm() const {
  double s = 0;
  for (double v : vec_) s += v * v;
  return std::sqrt(s);
}

double Paravector::abs2() const {
  double s = x0_ * x0_;
  for (double v : vec_) s += v * v;
  return s;
}

double Paravector::abs() const { return std::sqrt(abs2()); }

Paravector Paravector::conj() const {
  std::vector<double> v(vec_);
  for (double& t : v) t = -t;
  return Paravector(*alg_, x0_, std::move(v));
}

Multivector Paravector::to_multivector() const {
  Multivector m(*alg_);
  m[0] = x0_;
  for (std::size_t i = 0; i < vec_.size(); ++i) m[std::size_t{1} << i] = vec_[i];
  return m;
}

Paravector Paravector::pow(unsigned m) const {
  std::vector<double> v(vec_.size(), 0.0);
  if (m == 0) return Paravector(*alg_, 1.0, std::move(v));
  const double r = vec_norm();
  if (r == 0.0) return Paravector(*alg_, std::pow(x0_, static_cast<double>(m)), std::move(v));
  std::complex<double> z{1.0, 0.0};
  const std::complex<double> base{x0_, r};
  for (unsigned i = 0; i < m; ++i) z *= base;
  for (std::size_t i = 0; i < vec_.size(); ++i) v[i] = z.imag() * vec_[i] / r;
  return Paravector(*alg_, z.real(), std::move(v));
}

Paravector operator+(const Paravector& a, const Paravector& b) {
  require_same_algebra(a.algebra(), b.algebra(), "Paravector+");
  std::vector<double> v(a.vec_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.vec_[i];
  return Paravector(*a.alg_, a.x0_ + b.x0_, std::move(v));
}

Paravector operator-(const Paravector& a, const Paravector& b) {
  require_same_algebra(a.algebra(), b.algebra(), "Paravector-");
  std::vector<double> v(a.vec_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b.vec_[i];
  return Paravector(*a.alg_, a.x0_ - b.x0_, std::move(v));
}

Paravector operator*(double k, const Paravector& a) {
  std::vector<double> v(a.vec_);
  for (double& t : v) t *= k;
  return Paravector(*a.alg_, k * a.x0_, std::move(v));
}

SlicePoint::SlicePoint(const Algebra& alg, double u, double v, std::vector<double> unit)
    : alg_(&alg), u_(u), v_(v), unit_(std::move(unit)) {
  if (v < 0) throw std::invalid_argument("SlicePoint: v must be >= 0");
  if (static_cast<int>(unit_.size()) != alg.n())
    throw std::invalid_argument("SlicePoint: unit vector must have n entries");
  double s = 0;
  for (double t : unit_) s += t * t;
  if (std::abs(s - 1.0) > 1e-12) {
    if (s <= 0) throw std::invalid_argument("SlicePoint: zero slice unit");
    const double inv = 1.0 / std::sqrt(s);
    for (double& t : unit_) t *= inv;
  }
}

Paravector SlicePoint::realize() const {
  std::vector<double> v(unit_);
  for (double& t : v) t *= v_;
  return Paravector(*alg_, u_, std::move(v));
}

SlicePoint SlicePoint::decompose(const Paravector& x) {
  const double r = x.vec_norm();
  std::vector<double> unit(x.vec());
  if (r > 0) {
    for (double& t : unit) t /= r;
  } else {
    std::fill(unit.begin(), unit.end(), 0.0);
    unit[0] = 1.0;
  }
  return SlicePoint(x.algebra(), x.x0(), r, std::move(unit));
}

Multivector embed_slice(const Algebra& alg, std::complex<double> z, std::span<const double> unit) {
  Multivector m(alg);
  m[0] = z.real();
  for (std::size_t i = 0; i < unit.size(); ++i)
    m[std::size_t{1} << i] = z.imag() * unit[i];
  return m;
}

std::complex<double> project_slice(const Multivector& m, std::span<const double> unit,
                                   double* residual) {
  const double re = m[0];
  double im = 0;
  for (std::size_t i = 0; i < unit.size(); ++i) im += m[std::size_t{1} << i] * unit[i];
  if (residual) {
    Multivector back = embed_slice(m.algebra(), {re, im}, unit);
    *residual = (m - back).norm();
  }
  return {re, im};
}

std::complex<double> complexify(const Paravector& x) { return {x.x0(), x.vec_norm()}; }

bool same_sphere(const Paravector& x, const Paravector& s, double tol) {
  return std::abs(x.x0() - s.x0()) <= tol && std::abs(x.vec_norm() - s.vec_norm()) <= tol;
}

}  // namespace cliff
