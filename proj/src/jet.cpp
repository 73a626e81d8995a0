#include "cliffcalc/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "cliffcalc/simd.hpp"

namespace cliff {

// ---------------------------------------------------------------------------
// MultiIndexTable

MultiIndexTable::MultiIndexTable(int nvars, int order) : nvars_(nvars), order_(order) {
  binom_stride_ = static_cast<std::size_t>(order + nvars + 2);
  binom_.assign(binom_stride_ * binom_stride_, 0);
  for (std::size_t i = 0; i < binom_stride_; ++i) {
    binom_[i * binom_stride_] = 1;
    for (std::size_t k = 1; k <= i; ++k)
      binom_[i * binom_stride_ + k] =
          binom_[(i - 1) * binom_stride_ + k - 1] + binom_[(i - 1) * binom_stride_ + k];
  }

  offsets_.resize(order + 2);
  offsets_[0] = 0;
  for (int d = 0; d <= order; ++d)
    offsets_[d + 1] = offsets_[d] + static_cast<std::size_t>(binom(d + nvars - 1, nvars - 1));
  count_ = offsets_[order + 1];

  exp_.resize(count_ * nvars);
  degree_.resize(count_);
  std::vector<std::uint8_t> cur(nvars, 0);
  std::size_t pos = 0;
  // graded lex: first variable's exponent descending within each degree
  auto emit = [&](auto&& self, int var, int rem) -> void {
    if (var == nvars - 1) {
      cur[var] = static_cast<std::uint8_t>(rem);
      std::copy(cur.begin(), cur.end(), exp_.begin() + pos * nvars);
      ++pos;
      return;
    }
    for (int e = rem; e >= 0; --e) {
      cur[var] = static_cast<std::uint8_t>(e);
      self(self, var + 1, rem - e);
    }
  };
  for (int d = 0; d <= order; ++d) {
    std::size_t start = pos;
    emit(emit, 0, d);
    for (std::size_t i = start; i < pos; ++i) degree_[i] = d;
  }
}

std::size_t MultiIndexTable::rank(std::span<const std::uint8_t> alpha, int deg) const {
  // position within the degree layer, matching the descending-lex emission
  std::size_t r = 0;
  int rem = deg;
  for (int p = 0; p < nvars_ - 1; ++p) {
    const int vprime = nvars_ - p - 1;
    // tuples whose p-th exponent exceeds alpha[p]: e in (alpha[p], rem]
    // contribute C(rem - e + vprime - 1, vprime - 1) each; hockey-stick sum.
    const int t = rem - alpha[p] - 1;
    if (t >= 0) r += static_cast<std::size_t>(binom(t + vprime, vprime));
    rem -= alpha[p];
  }
  return r;
}

std::size_t MultiIndexTable::index_of(std::span<const std::uint8_t> alpha) const {
  int deg = 0;
  for (std::uint8_t e : alpha) deg += e;
  if (deg > order_) return npos;
  return offsets_[deg] + rank(alpha, deg);
}

std::size_t MultiIndexTable::shifted(std::size_t idx, int var, int by) const {
  std::uint8_t tmp[16] = {};
  auto a = exponents(idx);
  std::copy(a.begin(), a.end(), tmp);
  const int e = tmp[var] + by;
  if (e < 0) return npos;
  tmp[var] = static_cast<std::uint8_t>(e);
  return index_of({tmp, a.size()});
}

std::size_t MultiIndexTable::sum_index(std::size_t a, std::size_t b) const {
  const int deg = degree_[a] + degree_[b];
  if (deg > order_) return npos;
  std::uint8_t tmp[16] = {};
  auto ea = exponents(a);
  auto eb = exponents(b);
  for (int v = 0; v < nvars_; ++v) tmp[v] = static_cast<std::uint8_t>(ea[v] + eb[v]);
  return offsets_[deg] + rank({tmp, static_cast<std::size_t>(nvars_)}, deg);
}

std::shared_ptr<const MultiIndexTable> MultiIndexTable::get(int nvars, int order) {
  static std::mutex m;
  static std::map<std::pair<int, int>, std::shared_ptr<const MultiIndexTable>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot.reset(new MultiIndexTable(nvars, order));
  return slot;
}

// ---------------------------------------------------------------------------
// Jet

namespace {

// Order cap against combinatorial blowup: 3 h_n + 2 covers every check in
// the battery (Delta^{h_n} plus iterated D and a safety margin); n = 9 is
// capped harder, so the deepest expansion checks stay off there.
int jet_order_cap(int n) {
  if (n >= 9) return 10;
  return std::max(3 * ((n - 1) / 2) + 2, 8);
}

}  // namespace

Jet::Jet(const Algebra& alg, const Paravector& center, int order)
    : alg_(&alg),
      center_(center),
      order_(order),
      tab_(MultiIndexTable::get(alg.n() + 1, order)),
      c_(tab_->count() * alg.dim(), 0.0) {
  if (order < 0) throw std::invalid_argument("Jet: negative order");
  if (order > jet_order_cap(alg.n()))
    throw std::invalid_argument("Jet: order " + std::to_string(order) +
                                " exceeds the cap for n=" + std::to_string(alg.n()));
}

Multivector Jet::coeff_mv(std::size_t idx) const {
  Multivector m(*alg_);
  auto src = coeff(idx);
  std::copy(src.begin(), src.end(), m.data());
  return m;
}

void Jet::set_coeff(std::size_t idx, const Multivector& v) {
  auto dst = coeff(idx);
  std::copy(v.data(), v.data() + v.dim(), dst.begin());
}

void Jet::add_coeff(std::size_t idx, const Multivector& v, double scale) {
  kern::active().axpy(scale, v.data(), coeff(idx).data(), alg_->dim());
}

Multivector Jet::eval(const Paravector& x) const {
  Multivector acc(*alg_);
  std::vector<double> dx(alg_->n() + 1);
  dx[0] = x.x0() - center_.x0();
  for (int i = 0; i < alg_->n(); ++i) dx[i + 1] = x.vec()[i] - center_.vec()[i];
  for (std::size_t idx = 0; idx < tab_->count(); ++idx) {
    auto a = tab_->exponents(idx);
    double mono = 1.0;
    for (int v = 0; v < alg_->n() + 1; ++v)
      for (int k = 0; k < a[v]; ++k) mono *= dx[v];
    if (mono != 0.0) kern::active().axpy(mono, coeff(idx).data(), acc.data(), alg_->dim());
  }
  return acc;
}

Jet& Jet::operator+=(const Jet& o) {
  if (order_ != o.order_) throw std::invalid_argument("Jet+: order mismatch");
  kern::active().axpy(1.0, o.c_.data(), c_.data(), c_.size());
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (order_ != o.order_) throw std::invalid_argument("Jet-: order mismatch");
  kern::active().axpy(-1.0, o.c_.data(), c_.data(), c_.size());
  return *this;
}

Jet& Jet::operator*=(double k) {
  kern::active().scale(k, c_.data(), c_.size());
  return *this;
}

Jet jet_mul(const Jet& a, const Jet& b) {
  require_same_algebra(a.algebra(), b.algebra(), "jet_mul");
  const int order = std::min(a.order(), b.order());
  Jet out(a.algebra(), a.center(), order);
  const auto& tab = out.table();

  std::vector<std::size_t> nza, nzb;
  for (std::size_t i = 0; i < a.table().count(); ++i)
    if (a.table().degree(i) <= order && a.coeff_mv(i).nonzero_count() > 0) nza.push_back(i);
  for (std::size_t j = 0; j < b.table().count(); ++j)
    if (b.table().degree(j) <= order && b.coeff_mv(j).nonzero_count() > 0) nzb.push_back(j);

  for (std::size_t i : nza) {
    const int da = a.table().degree(i);
    const Multivector ca = a.coeff_mv(i);
    for (std::size_t j : nzb) {
      if (da + b.table().degree(j) > order) continue;
      // indices agree across tables of the same nvars for degrees <= order
      const std::size_t tgt = tab.sum_index(tab.index_of(a.table().exponents(i)),
                                            tab.index_of(b.table().exponents(j)));
      out.add_coeff(tgt, mv_mul(ca, b.coeff_mv(j)));
    }
  }
  return out;
}

Jet Jet::scaled_right(const Multivector& m) const {
  Jet out(*alg_, center_, order_);
  for (std::size_t i = 0; i < tab_->count(); ++i) out.set_coeff(i, mv_mul(coeff_mv(i), m));
  return out;
}

Jet Jet::scaled_left(const Multivector& m) const {
  Jet out(*alg_, center_, order_);
  for (std::size_t i = 0; i < tab_->count(); ++i) out.set_coeff(i, mv_mul(m, coeff_mv(i)));
  return out;
}

Jet Jet::truncated(int new_order) const {
  if (new_order >= order_) return *this;
  Jet out(*alg_, center_, new_order);
  std::copy(c_.begin(), c_.begin() + out.c_.size(), out.c_.begin());
  return out;
}

double Jet::norm() const { return std::sqrt(kern::active().dot(c_.data(), c_.data(), c_.size())); }

double Jet::max_coeff_norm() const {
  double m = 0;
  for (std::size_t i = 0; i < tab_->count(); ++i)
    m = std::max(m, std::sqrt(kern::active().dot(coeff(i).data(), coeff(i).data(), alg_->dim())));
  return m;
}

Jet jet_variable(const Algebra& alg, const Paravector& center, int order) {
  Jet j(alg, center, order);
  j.set_coeff(0, center.to_multivector());
  if (order >= 1) {
    // d/dx0 -> 1, d/dx_i -> e_i
    std::vector<std::uint8_t> a(alg.n() + 1, 0);
    a[0] = 1;
    j.coeff(j.table().index_of(a))[0] = 1.0;
    for (int i = 1; i <= alg.n(); ++i) {
      std::fill(a.begin(), a.end(), 0);
      a[i] = 1;
      j.coeff(j.table().index_of(a))[std::size_t{1} << (i - 1)] = 1.0;
    }
  }
  return j;
}

Jet jet_conj_variable(const Algebra& alg, const Paravector& center, int order) {
  Jet j(alg, center, order);
  j.set_coeff(0, center.conj().to_multivector());
  if (order >= 1) {
    std::vector<std::uint8_t> a(alg.n() + 1, 0);
    a[0] = 1;
    j.coeff(j.table().index_of(a))[0] = 1.0;
    for (int i = 1; i <= alg.n(); ++i) {
      std::fill(a.begin(), a.end(), 0);
      a[i] = 1;
      j.coeff(j.table().index_of(a))[std::size_t{1} << (i - 1)] = -1.0;
    }
  }
  return j;
}

Jet jet_constant(const Algebra& alg, const Paravector& center, int order, const Multivector& v) {
  Jet j(alg, center, order);
  j.set_coeff(0, v);
  return j;
}

Jet jet_pv_power(const Algebra& alg, const Paravector& center, int order, unsigned m) {
  Jet acc = jet_constant(alg, center, order, Multivector::scalar(alg, 1.0));
  if (m == 0) return acc;
  const Jet x = jet_variable(alg, center, order);
  for (unsigned k = 0; k < m; ++k) acc = jet_mul(acc, x);
  return acc;
}

Jet apply_dirac(const Jet& j, bool conjugate, Side side) {
  if (j.order() < 1) throw InsufficientOrderError("apply_dirac: order-0 jet");
  const Algebra& alg = j.algebra();
  Jet out(alg, j.center(), j.order() - 1);
  const auto& ot = out.table();
  const auto& jt = j.table();
  const double vsign = conjugate ? -1.0 : 1.0;
  for (std::size_t b = 0; b < ot.count(); ++b) {
    auto beta = ot.exponents(b);
    // d/dx0 term
    {
      std::size_t src = jt.index_of(beta);
      src = jt.shifted(src, 0, +1);
      out.add_coeff(b, j.coeff_mv(src), beta[0] + 1.0);
    }
    for (int i = 1; i <= alg.n(); ++i) {
      std::size_t src = jt.shifted(jt.index_of(beta), i, +1);
      const Multivector ei = Multivector::basis_vector(alg, i);
      const Multivector c = j.coeff_mv(src);
      const double f = vsign * (beta[i] + 1.0);
      out.add_coeff(b, side == Side::left ? mv_mul(ei, c) : mv_mul(c, ei), f);
    }
  }
  return out;
}

Jet apply_laplacian_power(const Jet& j, int m) {
  if (m == 0) return j;
  if (j.order() < 2 * m)
    throw InsufficientOrderError("apply_laplacian_power: order < 2m");
  const Algebra& alg = j.algebra();
  const int nv = alg.n() + 1;
  Jet out(alg, j.center(), j.order() - 2 * m);
  const auto& ot = out.table();
  const auto& jt = j.table();
  // alpha over |alpha| = m
  auto mtab = MultiIndexTable::get(nv, m);
  const double mfact = std::tgamma(m + 1.0);
  std::vector<std::uint8_t> sum(nv);
  for (std::size_t ai = mtab->degree_begin(m); ai < mtab->degree_end(m); ++ai) {
    auto alpha = mtab->exponents(ai);
    double multinom = mfact;
    for (int v = 0; v < nv; ++v) multinom /= std::tgamma(alpha[v] + 1.0);
    for (std::size_t b = 0; b < ot.count(); ++b) {
      auto beta = ot.exponents(b);
      double fac = multinom;
      for (int v = 0; v < nv; ++v) {
        sum[v] = static_cast<std::uint8_t>(beta[v] + 2 * alpha[v]);
        // (beta_v + 2 alpha_v)! / beta_v!
        for (int t = beta[v] + 1; t <= sum[v]; ++t) fac *= t;
      }
      const std::size_t src = jt.index_of(sum);
      out.add_coeff(b, j.coeff_mv(src), fac);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SliceJet

SliceJet::SliceJet(const Algebra& alg, const Paravector& center, int order,
                   std::vector<double> unit)
    : alg_(&alg),
      center_(center),
      order_(order),
      tab_(MultiIndexTable::get(alg.n() + 1, order)),
      unit_(std::move(unit)),
      c_(tab_->count(), {0.0, 0.0}) {
  if (order > jet_order_cap(alg.n()))
    throw std::invalid_argument("SliceJet: order exceeds the cap for n=" +
                                std::to_string(alg.n()));
}

SliceJet slice_mul(const SliceJet& a, const SliceJet& b) {
  const int order = std::min(a.order(), b.order());
  SliceJet out(a.algebra(), a.center(), order, a.unit());
  const auto& tab = out.table();
  for (int da = 0; da <= order; ++da) {
    for (std::size_t i = a.table().degree_begin(da); i < a.table().degree_end(da); ++i) {
      const std::complex<double> ca = a.coeff(i);
      if (ca == std::complex<double>(0.0, 0.0)) continue;
      const std::size_t ia = tab.index_of(a.table().exponents(i));
      for (int db = 0; db + da <= order; ++db) {
        for (std::size_t j = b.table().degree_begin(db); j < b.table().degree_end(db); ++j) {
          const std::complex<double> cb = b.coeff(j);
          if (cb == std::complex<double>(0.0, 0.0)) continue;
          out.coeff(tab.sum_index(ia, tab.index_of(b.table().exponents(j)))) += ca * cb;
        }
      }
    }
  }
  return out;
}

SliceJet SliceJet::recip() const {
  double scale = 0;
  for (const auto& z : c_) scale = std::max(scale, std::abs(z));
  const std::complex<double> q0 = c_[0];
  if (std::abs(q0) <= 1e-12 * (1.0 + scale))
    throw SingularJetError("SliceJet::recip: constant term (numerically) zero; "
                           "expansion point lies on the sphere of the kernel's singularity");
  // q = q0 (1 + u); 1/q = (sum (-u)^k) / q0, Horner-truncated
  SliceJet u(*alg_, center_, order_, unit_);
  for (std::size_t i = 1; i < c_.size(); ++i) u.coeff(i) = c_[i] / q0;
  SliceJet acc(*alg_, center_, order_, unit_);
  acc.coeff(0) = 1.0;
  for (int k = 0; k < order_; ++k) {
    acc = slice_mul(u, acc);
    for (auto& z : acc.c_) z = -z;
    acc.coeff(0) += 1.0;
  }
  for (auto& z : acc.c_) z /= q0;
  return acc;
}

SliceJet SliceJet::pow(int m) const {
  if (m < 1) throw std::invalid_argument("SliceJet::pow: m >= 1 required");
  SliceJet acc = *this;
  for (int k = 1; k < m; ++k) acc = slice_mul(acc, *this);
  return acc;
}

Jet SliceJet::promote() const {
  Jet out(*alg_, center_, order_);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == std::complex<double>(0.0, 0.0)) continue;
    out.set_coeff(i, embed_slice(*alg_, c_[i], unit_));
  }
  return out;
}

SliceJet jet_qcs(const Algebra& alg, const Paravector& s, const Paravector& center, int order) {
  SlicePoint sp = SlicePoint::decompose(s);
  SliceJet q(alg, center, order, sp.unit());
  const std::complex<double> sigma = complexify(s);
  const int nv = alg.n() + 1;
  std::vector<double> c(nv);
  c[0] = center.x0();
  for (int i = 0; i < alg.n(); ++i) c[i + 1] = center.vec()[i];
  // Q(x) = sigma^2 - 2 x0 sigma + sum_v x_v^2 expanded around `center`
  double c2 = 0;
  for (double t : c) c2 += t * t;
  q.coeff(0) = sigma * sigma - 2.0 * c[0] * sigma + c2;
  std::vector<std::uint8_t> a(nv, 0);
  for (int v = 0; v < nv && order >= 1; ++v) {
    std::fill(a.begin(), a.end(), 0);
    a[v] = 1;
    std::complex<double> lin = 2.0 * c[v];
    if (v == 0) lin -= 2.0 * sigma;
    q.coeff(q.table().index_of(a)) = lin;
    if (order >= 2) {
      a[v] = 2;
      q.coeff(q.table().index_of(a)) = 1.0;
    }
  }
  return q;
}

SliceJet slice_jet_from(const Jet& j, std::span<const double> unit, double tol) {
  SliceJet out(j.algebra(), j.center(), j.order(), std::vector<double>(unit.begin(), unit.end()));
  const double scale = std::max(1.0, j.max_coeff_norm());
  for (std::size_t i = 0; i < j.table().count(); ++i) {
    double resid = 0;
    out.coeff(i) = project_slice(j.coeff_mv(i), unit, &resid);
    if (resid > tol * scale)
      throw SingularJetError("slice_jet_from: coefficient outside the slice subalgebra");
  }
  return out;
}

Jet jet_recip(const Jet& q) {
  // infer the slice direction from the largest grade-1 content
  const Algebra& alg = q.algebra();
  std::vector<double> dir(alg.n(), 0.0);
  double best = 0;
  for (std::size_t i = 0; i < q.table().count(); ++i) {
    auto c = q.coeff(i);
    double g1 = 0;
    for (int v = 0; v < alg.n(); ++v) g1 += c[std::size_t{1} << v] * c[std::size_t{1} << v];
    if (g1 > best) {
      best = g1;
      for (int v = 0; v < alg.n(); ++v) dir[v] = c[std::size_t{1} << v];
    }
  }
  if (best == 0) {
    dir.assign(alg.n(), 0.0);
    dir[0] = 1.0;  // all-real jet: any slice works
  } else {
    const double inv = 1.0 / std::sqrt(best);
    for (double& t : dir) t *= inv;
  }
  return slice_jet_from(q, dir).recip().promote();
}

}  // namespace cliff
