#include "cliffcalc/operator_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "cliffcalc/polynomials.hpp"

namespace cliff {

using poly::sce_exponent;

namespace {

double binom(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0.0;
  double r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// CliffordMatrix

CliffordMatrix::CliffordMatrix(const Algebra& alg, int d) : alg_(&alg), d_(d) {
  if (d < 1) throw std::invalid_argument("CliffordMatrix: d >= 1");
  e_.assign(static_cast<std::size_t>(d) * d, Multivector(alg));
}

CliffordMatrix CliffordMatrix::identity(const Algebra& alg, int d) {
  CliffordMatrix m(alg, d);
  for (int i = 0; i < d; ++i) m.at(i, i) = Multivector::scalar(alg, 1.0);
  return m;
}

CliffordMatrix CliffordMatrix::from_real(const Algebra& alg, const Eigen::MatrixXd& m) {
  CliffordMatrix out(alg, static_cast<int>(m.rows()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.at(i, j)[0] = m(i, j);
  return out;
}

CliffordMatrix CliffordMatrix::from_complex_slice(const Algebra& alg, const Eigen::MatrixXcd& m,
                                                  std::span<const double> unit) {
  CliffordMatrix out(alg, static_cast<int>(m.rows()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.at(i, j) = embed_slice(alg, m(i, j), unit);
  return out;
}

CliffordMatrix& CliffordMatrix::operator+=(const CliffordMatrix& o) {
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
  return *this;
}

CliffordMatrix& CliffordMatrix::operator-=(const CliffordMatrix& o) {
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
  return *this;
}

CliffordMatrix& CliffordMatrix::operator*=(double k) {
  for (auto& m : e_) m *= k;
  return *this;
}

CliffordMatrix operator*(const CliffordMatrix& a, const CliffordMatrix& b) {
  require_same_algebra(a.algebra(), b.algebra(), "CliffordMatrix*");
  if (a.d() != b.d()) throw std::invalid_argument("CliffordMatrix*: size mismatch");
  CliffordMatrix out(a.algebra(), a.d());
  for (int i = 0; i < a.d(); ++i)
    for (int j = 0; j < a.d(); ++j)
      for (int k = 0; k < a.d(); ++k) out.at(i, j) += mv_mul(a.at(i, k), b.at(k, j));
  return out;
}

CliffordMatrix CliffordMatrix::scaled_right(const Multivector& m) const {
  CliffordMatrix out(*alg_, d_);
  for (std::size_t k = 0; k < e_.size(); ++k) out.e_[k] = mv_mul(e_[k], m);
  return out;
}

CliffordMatrix CliffordMatrix::scaled_left(const Multivector& m) const {
  CliffordMatrix out(*alg_, d_);
  for (std::size_t k = 0; k < e_.size(); ++k) out.e_[k] = mv_mul(m, e_[k]);
  return out;
}

CliffordMatrix CliffordMatrix::pow(int k) const {
  CliffordMatrix acc = identity(*alg_, d_);
  for (int i = 0; i < k; ++i) acc = acc * (*this);
  return acc;
}

double CliffordMatrix::norm() const {
  double s = 0;
  for (const auto& m : e_) {
    const double t = m.norm();
    s += t * t;
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// CommutingParavectorOp

CommutingParavectorOp::CommutingParavectorOp(const Algebra& alg,
                                             std::vector<Eigen::MatrixXd> components)
    : alg_(&alg), comp_(std::move(components)) {
  if (static_cast<int>(comp_.size()) != alg.n() + 1)
    throw std::invalid_argument("CommutingParavectorOp: need n+1 components T0..Tn");
  d_ = static_cast<int>(comp_[0].rows());
  for (const auto& c : comp_)
    if (c.rows() != d_ || c.cols() != d_)
      throw std::invalid_argument("CommutingParavectorOp: components must be d x d");
}

CommutingParavectorOp CommutingParavectorOp::from_paravector(const Paravector& x) {
  std::vector<Eigen::MatrixXd> c;
  c.push_back(Eigen::MatrixXd::Constant(1, 1, x.x0()));
  for (double v : x.vec()) c.push_back(Eigen::MatrixXd::Constant(1, 1, v));
  return CommutingParavectorOp(x.algebra(), std::move(c));
}

double CommutingParavectorOp::commutation_defect() const {
  double worst = 0;
  for (std::size_t i = 0; i < comp_.size(); ++i)
    for (std::size_t j = i + 1; j < comp_.size(); ++j) {
      const double scale = std::max(1.0, comp_[i].norm() * comp_[j].norm());
      worst = std::max(worst, (comp_[i] * comp_[j] - comp_[j] * comp_[i]).norm() / scale);
    }
  return worst;
}

void CommutingParavectorOp::require_commuting(double tol) const {
  if (commutation_defect() > tol)
    throw HypothesisError("components do not commute (defect " +
                          std::to_string(commutation_defect()) + ")");
}

void CommutingParavectorOp::require_symmetric_components(double tol) const {
  for (std::size_t mu = 0; mu < comp_.size(); ++mu) {
    const double scale = std::max(1.0, comp_[mu].norm());
    if ((comp_[mu] - comp_[mu].transpose()).norm() / scale > tol)
      throw HypothesisError("component T_" + std::to_string(mu) +
                            " is not symmetric (real spectra required)");
  }
}

void CommutingParavectorOp::require_component_zero(int mu, double tol) const {
  if (comp_[mu].norm() > tol)
    throw HypothesisError("component T_" + std::to_string(mu) +
                          " must be zero for this calculus");
}

Eigen::MatrixXd CommutingParavectorOp::sum_of_squares() const {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d_, d_);
  for (const auto& c : comp_) s += c * c;
  return s;
}

double CommutingParavectorOp::norm_estimate() const {
  double s = 0;
  for (const auto& c : comp_) s += c.operatorNorm();
  return s;
}

CliffordMatrix CommutingParavectorOp::to_matrix() const {
  CliffordMatrix m(*alg_, d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) {
      m.at(i, j)[0] = comp_[0](i, j);
      for (int mu = 1; mu <= alg_->n(); ++mu)
        m.at(i, j)[std::size_t{1} << (mu - 1)] = comp_[mu](i, j);
    }
  return m;
}

CliffordMatrix CommutingParavectorOp::conj_matrix() const {
  CliffordMatrix m = to_matrix();
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      for (int mu = 1; mu <= alg_->n(); ++mu)
        m.at(i, j)[std::size_t{1} << (mu - 1)] *= -1.0;
  return m;
}

// ---------------------------------------------------------------------------
// Spectrum

std::vector<SpectrumSphere> s_spectrum(const CommutingParavectorOp& T) {
  const int d = T.d();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  companion.topRightCorner(d, d) = Eigen::MatrixXd::Identity(d, d);
  companion.bottomLeftCorner(d, d) = -T.sum_of_squares();
  companion.bottomRightCorner(d, d) = T.two_t0();
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("s_spectrum: companion eigensolve failed");
  std::vector<SpectrumSphere> out;
  for (int i = 0; i < 2 * d; ++i) {
    const SpectrumSphere sph{es.eigenvalues()[i].real(), std::abs(es.eigenvalues()[i].imag())};
    bool dup = false;
    for (const auto& o : out)
      dup = dup || (std::abs(o.t0 - sph.t0) < 1e-10 && std::abs(o.rho - sph.rho) < 1e-10);
    if (!dup) out.push_back(sph);
  }
  return out;
}

double spectral_distance(const Paravector& s, const std::vector<SpectrumSphere>& spec) {
  double best = std::numeric_limits<double>::infinity();
  const double s0 = s.x0(), r = s.vec_norm();
  for (const auto& sph : spec)
    best = std::min(best, std::hypot(s0 - sph.t0, r - sph.rho));
  return best;
}

// ---------------------------------------------------------------------------
// Resolvents

CliffordMatrix qcs_inv_pow_op(const Paravector& s, const CommutingParavectorOp& T, int m) {
  const Algebra& alg = T.algebra();
  const std::complex<double> sigma = complexify(s);
  const int d = T.d();
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(d, d) * (sigma * sigma);
  q -= sigma * T.two_t0();
  q += T.sum_of_squares();
  const Eigen::MatrixXcd qinv = q.inverse();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(d, d);
  for (int i = 0; i < m; ++i) acc = acc * qinv;
  return CliffordMatrix::from_complex_slice(alg, acc, SlicePoint::decompose(s).unit());
}

namespace {

CliffordMatrix s_identity_minus(const Paravector& s, const CliffordMatrix& m) {
  CliffordMatrix out = m;
  out *= -1.0;
  const Multivector sm = s.to_multivector();
  for (int i = 0; i < out.d(); ++i) out.at(i, i) += sm;
  return out;
}

void require_resolvent_margin(const Paravector& s, const CommutingParavectorOp& T) {
  const auto spec = s_spectrum(T);
  const double scale = std::max(1.0, T.norm_estimate());
  if (spectral_distance(s, spec) < 1e-6 * scale)
    throw SpectralProximityError("resolvent: s within 1e-6 of the S-spectrum");
}

}  // namespace

CliffordMatrix resolvent(ResolventKind kind, int param, const Paravector& s,
                         const CommutingParavectorOp& T) {
  const Algebra& alg = T.algebra();
  const int n = alg.n();
  const int h = sce_exponent(n);
  T.require_commuting();
  require_resolvent_margin(s, T);

  switch (kind) {
    case ResolventKind::Qc:
      return qcs_inv_pow_op(s, T, 1);
    case ResolventKind::SL:
      return s_identity_minus(s, T.conj_matrix()) * qcs_inv_pow_op(s, T, 1);
    case ResolventKind::SR:
      return qcs_inv_pow_op(s, T, 1) * s_identity_minus(s, T.conj_matrix());
    case ResolventKind::FL:
      return poly::gamma_n(n) *
             (s_identity_minus(s, T.conj_matrix()) * qcs_inv_pow_op(s, T, h + 1));
    case ResolventKind::FR:
      return poly::gamma_n(n) *
             (qcs_inv_pow_op(s, T, h + 1) * s_identity_minus(s, T.conj_matrix()));
    case ResolventKind::H:
      if (param < 1 || param > h) throw ParameterRangeError("H resolvent: 1 <= l <= h_n");
      return poly::sigma_nl(n, param) * qcs_inv_pow_op(s, T, param);
    case ResolventKind::KL:
      if (param < 1 || param > h - 1)
        throw ParameterRangeError("K resolvent: 1 <= alpha <= h_n-1 (empty at n=3)");
      return poly::k_alpha(n, param) *
             (s_identity_minus(s, T.conj_matrix()) * qcs_inv_pow_op(s, T, param + 1));
    case ResolventKind::KR:
      if (param < 1 || param > h - 1)
        throw ParameterRangeError("K resolvent: 1 <= alpha <= h_n-1 (empty at n=3)");
      return poly::k_alpha(n, param) *
             (qcs_inv_pow_op(s, T, param + 1) * s_identity_minus(s, T.conj_matrix()));
    case ResolventKind::PL:
    case ResolventKind::PR: {
      if (param < 0 || param > h - 1) throw ParameterRangeError("P resolvent: 0 <= l <= h_n-1");
      const std::complex<double> sigma = complexify(s);
      Eigen::MatrixXcd sx0 = Eigen::MatrixXcd::Identity(T.d(), T.d()) * sigma -
                             T.component(0).cast<std::complex<double>>();
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(T.d(), T.d());
      for (int i = 0; i < h - param; ++i) acc = acc * sx0;
      const CliffordMatrix sx0_pow =
          CliffordMatrix::from_complex_slice(alg, acc, SlicePoint::decompose(s).unit());
      const double c = ((h - param) % 2 == 0 ? 1.0 : -1.0) / std::tgamma(h - param + 1.0);
      if (kind == ResolventKind::PL)
        return c * (resolvent(ResolventKind::FL, 0, s, T) * sx0_pow);
      return c * (sx0_pow * resolvent(ResolventKind::FR, 0, s, T));
    }
    case ResolventKind::PseudoQ: {
      // Q_s(T) = T^2 - 2 s0 T + |s|^2 I stays in paravector form for
      // commuting components; invert via conjugate times real inverse.
      const Eigen::MatrixXd a = T.component(0) * T.component(0) -
                                (T.sum_of_squares() - T.component(0) * T.component(0)) -
                                2.0 * s.x0() * T.component(0) +
                                s.abs2() * Eigen::MatrixXd::Identity(T.d(), T.d());
      std::vector<Eigen::MatrixXd> b(n);
      for (int i = 1; i <= n; ++i)
        b[i - 1] = 2.0 * (T.component(0) - s.x0() * Eigen::MatrixXd::Identity(T.d(), T.d())) *
                   T.component(i);
      Eigen::MatrixXd denom = a * a;
      for (const auto& bi : b) denom += bi * bi;
      const Eigen::MatrixXd dinv = denom.inverse();
      CliffordMatrix out = CliffordMatrix::from_real(alg, a * dinv);
      for (int i = 1; i <= n; ++i) {
        CliffordMatrix vec = CliffordMatrix::from_real(alg, b[i - 1] * dinv);
        out -= vec.scaled_left(Multivector::basis_vector(alg, i));
      }
      return out;
    }
  }
  throw std::logic_error("resolvent: unhandled kind");
}

CliffordMatrix appell_operator(const CommutingParavectorOp& T, int k) {
  const Algebra& alg = T.algebra();
  if (k < 0) return CliffordMatrix(alg, T.d());
  CliffordMatrix acc(alg, T.d());
  const CliffordMatrix tm = T.to_matrix();
  const CliffordMatrix tb = T.conj_matrix();
  for (int l = 0; l <= k; ++l)
    acc += poly::appell_coeff(alg.n(), k, l) * (tm.pow(k - l) * tb.pow(l));
  return acc;
}

CliffordMatrix harmonic_operator(const CommutingParavectorOp& T, int k) {
  const Algebra& alg = T.algebra();
  if (k < 0) return CliffordMatrix(alg, T.d());
  CliffordMatrix acc(alg, T.d());
  const CliffordMatrix tm = T.to_matrix();
  const CliffordMatrix tb = T.conj_matrix();
  for (int l = 0; l <= k; ++l)
    acc += poly::harmonic_coeff(alg.n(), k, l) * (tm.pow(k - l) * tb.pow(l));
  return acc;
}

CliffordMatrix resolvent_series(ResolventKind kind, int param, const Paravector& s,
                                const CommutingParavectorOp& T, int terms) {
  const Algebra& alg = T.algebra();
  const int n = alg.n();
  const int h = sce_exponent(n);
  const double ratio = T.norm_estimate() / s.abs();
  if (ratio > 0.75) throw RatioError("resolvent_series: ||T||/|s| <= 0.75 required");

  const auto s_unit = SlicePoint::decompose(s).unit();
  const std::complex<double> sig = complexify(s);
  auto spow_mv = [&](int e) { return embed_slice(alg, std::pow(sig, e), s_unit); };

  CliffordMatrix acc(alg, T.d());
  switch (kind) {
    case ResolventKind::SL: {
      const CliffordMatrix tm = T.to_matrix();
      CliffordMatrix p = CliffordMatrix::identity(alg, T.d());
      for (int m = 0; m <= terms; ++m) {
        acc += p.scaled_right(spow_mv(-1 - m));
        p = p * tm;
      }
      break;
    }
    case ResolventKind::SR: {
      const CliffordMatrix tm = T.to_matrix();
      CliffordMatrix p = CliffordMatrix::identity(alg, T.d());
      for (int m = 0; m <= terms; ++m) {
        acc += p.scaled_left(spow_mv(-1 - m));
        p = p * tm;
      }
      break;
    }
    case ResolventKind::FL:
      for (int m = 2 * h; m <= terms; ++m)
        acc += (binom(m, m - 2 * h) * appell_operator(T, m - 2 * h)).scaled_right(spow_mv(-1 - m));
      acc *= poly::gamma_n(n);
      break;
    case ResolventKind::FR:
      for (int m = 2 * h; m <= terms; ++m)
        acc += (binom(m, m - 2 * h) * appell_operator(T, m - 2 * h)).scaled_left(spow_mv(-1 - m));
      acc *= poly::gamma_n(n);
      break;
    case ResolventKind::H: {
      const int l = param;
      if (l < 1 || l > h) throw ParameterRangeError("H series: 1 <= l <= h_n");
      const Eigen::MatrixXd t0 = T.component(0);
      const Eigen::MatrixXd tt = T.sum_of_squares();
      for (int m = 2 * h - 1; m <= terms; ++m) {
        const CliffordMatrix hk = harmonic_operator(T, m - 2 * h + 1);
        for (int k = 0; k <= h - l; ++k)
          for (int t = 0; t <= h - l - k; ++t) {
            const double kk = binom(m, 2 * h - 1) * binom(h - l - k, t) * binom(h - l, k);
            Eigen::MatrixXd pre = Eigen::MatrixXd::Identity(T.d(), T.d());
            for (int i = 0; i < t; ++i) pre = pre * tt;
            for (int i = 0; i < h - l - k - t; ++i) pre = pre * (-2.0 * t0);
            // exponent carries +k (series-vs-closed disambiguation)
            acc += (kk * (CliffordMatrix::from_real(alg, pre) * hk))
                       .scaled_right(spow_mv(-1 + h - l + k - t - m));
          }
      }
      acc *= poly::sigma_nl(n, l);
      break;
    }
    case ResolventKind::KL:
    case ResolventKind::KR: {
      const int a = param;
      if (a < 1 || a > h - 1) throw ParameterRangeError("K series: 1 <= alpha <= h_n-1");
      const Eigen::MatrixXd t0 = T.component(0);
      const Eigen::MatrixXd tt = T.sum_of_squares();
      for (int k = 2 * a; k <= terms; ++k) {
        CliffordMatrix term(alg, T.d());
        for (int l = 0; l <= h - a; ++l)
          for (int v = 0; v <= l; ++v) {
            const int deg = k - 2 * a - 2 * l + v;
            if (deg < 0) continue;
            const double kap =
                binom(h - a, l) * binom(l, v) * binom(k + 2 * h - 2 * a - 2 * l + v, deg);
            Eigen::MatrixXd pre = Eigen::MatrixXd::Identity(T.d(), T.d());
            for (int i = 0; i < v; ++i) pre = pre * (-2.0 * t0);
            for (int i = 0; i < l - v; ++i) pre = pre * tt;
            term += kap * (CliffordMatrix::from_real(alg, pre) * appell_operator(T, deg));
          }
        acc += kind == ResolventKind::KL ? term.scaled_right(spow_mv(-1 - k))
                                         : term.scaled_left(spow_mv(-1 - k));
      }
      acc *= poly::k_alpha(n, a);
      break;
    }
    case ResolventKind::PL:
    case ResolventKind::PR: {
      const int l = param;
      if (l < 0 || l > h - 1) throw ParameterRangeError("P series: 0 <= l <= h_n-1");
      const Eigen::MatrixXd t0 = T.component(0);
      for (int m = h + l; m <= terms; ++m) {
        CliffordMatrix term(alg, T.d());
        for (int k = 0; k <= h - l; ++k) {
          const int deg = m - h - l - k;
          if (deg < 0) continue;
          double kt = binom(h - l, k) * binom(m - k - l + h, deg);
          if ((k + h - l) % 2 == 1) kt = -kt;
          Eigen::MatrixXd pre = Eigen::MatrixXd::Identity(T.d(), T.d());
          for (int i = 0; i < k; ++i) pre = pre * t0;
          term += kt * (CliffordMatrix::from_real(alg, pre) * appell_operator(T, deg));
        }
        acc += kind == ResolventKind::PL ? term.scaled_right(spow_mv(-1 - m))
                                         : term.scaled_left(spow_mv(-1 - m));
      }
      acc *= poly::gamma_n(n) / std::tgamma(h - l + 1.0);
      break;
    }
    default:
      throw std::invalid_argument("resolvent_series: no series for this kind");
  }
  return acc;
}

// ---------------------------------------------------------------------------
// SlicePolynomial

SlicePolynomial::SlicePolynomial(Side side, std::vector<Multivector> coeffs)
    : side_(side), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("SlicePolynomial: needs >= 1 coefficient");
}

SlicePolynomial SlicePolynomial::monomial(const Algebra& alg, Side side, int degree, double scale) {
  std::vector<Multivector> c(degree + 1, Multivector(alg));
  c[degree] = Multivector::scalar(alg, scale);
  return SlicePolynomial(side, std::move(c));
}

bool SlicePolynomial::intrinsic(double tol) const {
  for (const auto& c : coeffs_) {
    Multivector rest = c;
    rest[0] = 0.0;
    if (rest.norm() > tol) return false;
  }
  return true;
}

Multivector SlicePolynomial::eval(const Paravector& s) const {
  const Algebra& alg = algebra();
  Multivector acc(alg);
  for (std::size_t m = 0; m < coeffs_.size(); ++m) {
    const Multivector sp = s.pow(static_cast<unsigned>(m)).to_multivector();
    acc += side_ == Side::left ? mv_mul(sp, coeffs_[m]) : mv_mul(coeffs_[m], sp);
  }
  return acc;
}

Jet SlicePolynomial::to_jet(const Paravector& center, int order) const {
  const Algebra& alg = algebra();
  Jet acc(alg, center, order);
  for (std::size_t m = 0; m < coeffs_.size(); ++m) {
    const Jet p = jet_pv_power(alg, center, order, static_cast<unsigned>(m));
    acc += side_ == Side::left ? p.scaled_right(coeffs_[m]) : p.scaled_left(coeffs_[m]);
  }
  return acc;
}

SlicePolynomial intrinsic_product(const SlicePolynomial& f, const SlicePolynomial& g) {
  if (!f.intrinsic()) throw SideMismatchError("intrinsic_product: f must be intrinsic");
  const Algebra& alg = g.algebra();
  std::vector<Multivector> c(f.coeffs_.size() + g.coeffs_.size() - 1, Multivector(alg));
  for (std::size_t i = 0; i < f.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < g.coeffs_.size(); ++j)
      c[i + j] += mv_mul(f.coeffs_[i], g.coeffs_[j]);
  return SlicePolynomial(g.side(), std::move(c));
}

SlicePolynomial SlicePolynomial::operator+(const SlicePolynomial& o) const {
  if (side_ != o.side_) throw SideMismatchError("SlicePolynomial+: side mismatch");
  std::vector<Multivector> c(std::max(coeffs_.size(), o.coeffs_.size()),
                             Multivector(algebra()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < coeffs_.size()) c[i] += coeffs_[i];
    if (i < o.coeffs_.size()) c[i] += o.coeffs_[i];
  }
  return SlicePolynomial(side_, std::move(c));
}

// ---------------------------------------------------------------------------
// Contour calculi

namespace {

void check_enclosure(const CommutingParavectorOp& T, const ContourSpec& contour) {
  const auto spec = s_spectrum(T);
  for (const auto& sph : spec) {
    const double dist = std::hypot(sph.t0 - contour.center, sph.rho);
    if (dist > 0.9 * contour.radius)
      throw EnclosureError("contour does not enclose the S-spectrum with margin (sphere at t0=" +
                           std::to_string(sph.t0) + ", rho=" + std::to_string(sph.rho) + ")");
  }
}

void check_hypotheses(Calculus calc, const CommutingParavectorOp& T) {
  T.require_commuting();
  switch (calc) {
    case Calculus::S:
      break;
    case Calculus::F:
    case Calculus::Polyharmonic:
    case Calculus::Cliffordian:
      T.require_symmetric_components();
      break;
    case Calculus::Polyanalytic:
      T.require_symmetric_components();
      T.require_component_zero(T.n());
      break;
  }
}

ResolventKind resolvent_for(Calculus calc, Side side) {
  switch (calc) {
    case Calculus::S:
      return side == Side::left ? ResolventKind::SL : ResolventKind::SR;
    case Calculus::F:
      return side == Side::left ? ResolventKind::FL : ResolventKind::FR;
    case Calculus::Polyharmonic:
      return ResolventKind::H;
    case Calculus::Cliffordian:
      return side == Side::left ? ResolventKind::KL : ResolventKind::KR;
    case Calculus::Polyanalytic:
      return side == Side::left ? ResolventKind::PL : ResolventKind::PR;
  }
  throw std::logic_error("resolvent_for");
}

struct ContourNodes {
  std::vector<Paravector> s;
  std::vector<Multivector> weight;  // r e^{I theta}
};

ContourNodes contour_nodes(const Algebra& alg, const ContourSpec& contour) {
  if (contour.nodes < 8 || contour.nodes % 2 != 0)
    throw std::invalid_argument("contour: node count must be even and >= 8");
  if (static_cast<int>(contour.slice_unit.size()) != alg.n())
    throw std::invalid_argument("contour: slice unit must have n entries");
  ContourNodes out;
  for (int k = 0; k < contour.nodes; ++k) {
    const double th = 2.0 * std::numbers::pi * k / contour.nodes;
    // signed sin: points below the real axis realize u + (-I)|v|
    std::vector<double> v(contour.slice_unit);
    for (double& t : v) t *= contour.radius * std::sin(th);
    out.s.emplace_back(alg, contour.center + contour.radius * std::cos(th), std::move(v));
    out.weight.push_back(embed_slice(
        alg,
        std::complex<double>(contour.radius * std::cos(th), contour.radius * std::sin(th)),
        contour.slice_unit));
  }
  return out;
}

}  // namespace

CliffordMatrix contour_calculus(Calculus calc, int param, const SlicePolynomial& f,
                                const CommutingParavectorOp& T, const ContourSpec& contour) {
  const Algebra& alg = T.algebra();
  check_hypotheses(calc, T);
  check_enclosure(T, contour);
  const ResolventKind kind = resolvent_for(calc, f.side());

  const ContourNodes nodes = contour_nodes(alg, contour);
  CliffordMatrix acc(alg, T.d());
  for (int k = 0; k < contour.nodes; ++k) {
    const CliffordMatrix res = resolvent(kind, param, nodes.s[k], T);
    const Multivector fs = f.eval(nodes.s[k]);
    if (f.side() == Side::left)
      acc += res.scaled_right(mv_mul(nodes.weight[k], fs));
    else
      acc += res.scaled_left(mv_mul(fs, nodes.weight[k]));
  }
  acc *= 1.0 / contour.nodes;
  return acc;
}

CliffordMatrix appell_moment(const CommutingParavectorOp& T, int m, const ContourSpec& contour) {
  const Algebra& alg = T.algebra();
  const int n = alg.n();
  const int h = sce_exponent(n);
  check_hypotheses(Calculus::F, T);
  check_enclosure(T, contour);
  const ContourNodes nodes = contour_nodes(alg, contour);
  CliffordMatrix acc(alg, T.d());
  for (int k = 0; k < contour.nodes; ++k) {
    const CliffordMatrix res = resolvent(ResolventKind::FL, 0, nodes.s[k], T);
    const Multivector sp = nodes.s[k].pow(static_cast<unsigned>(m + 2 * h)).to_multivector();
    acc += res.scaled_right(mv_mul(nodes.weight[k], sp));
  }
  // c_{m,n} absorbs the 1/(2 pi); the raw contour integral is 2 pi x mean
  acc *= poly::c_mn(n, m) * 2.0 * std::numbers::pi / contour.nodes;
  return acc;
}

int moment_vanishing_bound(Calculus kind, int param, int n) {
  const int h = sce_exponent(n);
  switch (kind) {
    case Calculus::F:
      return 2 * h - 1;
    case Calculus::Polyharmonic:
      return 2 * (param - 1);
    case Calculus::Cliffordian:
      return 2 * param - 1;
    case Calculus::Polyanalytic:
      return h + param - 1;
    default:
      throw std::invalid_argument("moment_vanishing_bound: S calculus has no vanishing range");
  }
}

double moment_vanishing(Calculus kind, int param, const CommutingParavectorOp& T,
                        const ContourSpec& contour, int exponent) {
  const Algebra& alg = T.algebra();
  check_hypotheses(kind, T);
  check_enclosure(T, contour);
  const ContourNodes nodes = contour_nodes(alg, contour);
  CliffordMatrix acc(alg, T.d());
  for (int k = 0; k < contour.nodes; ++k) {
    const CliffordMatrix res = resolvent(resolvent_for(kind, Side::left), param, nodes.s[k], T);
    const Multivector sp = nodes.s[k].pow(static_cast<unsigned>(exponent)).to_multivector();
    acc += res.scaled_right(mv_mul(nodes.weight[k], sp));
  }
  acc *= 2.0 * std::numbers::pi / contour.nodes;
  return acc.norm();
}

// ---------------------------------------------------------------------------
// Resolvent equations

double resolvent_equation_check(ResolventEquation which, const Paravector& s, const Paravector& p,
                                const CommutingParavectorOp& T) {
  const Algebra& alg = T.algebra();
  const int n = alg.n();
  const int h = sce_exponent(n);
  const CliffordMatrix I = CliffordMatrix::identity(alg, T.d());

  switch (which) {
    case ResolventEquation::LeftS: {
      const CliffordMatrix sl = resolvent(ResolventKind::SL, 0, s, T);
      const CliffordMatrix r =
          sl.scaled_right(s.to_multivector()) - T.to_matrix() * sl - I;
      return r.norm();
    }
    case ResolventEquation::RightS: {
      const CliffordMatrix sr = resolvent(ResolventKind::SR, 0, s, T);
      const CliffordMatrix r =
          sr.scaled_left(s.to_multivector()) - sr * T.to_matrix() - I;
      return r.norm();
    }
    case ResolventEquation::TwoSidedS: {
      if (same_sphere(s, p, 1e-9))
        throw SphereViolationError("two-sided S-resolvent equation: p not in [s] required");
      const CliffordMatrix sr = resolvent(ResolventKind::SR, 0, s, T);
      const CliffordMatrix slp = resolvent(ResolventKind::SL, 0, p, T);
      const CliffordMatrix diff = sr - slp;
      // (p^2 - 2 s0 p + |s|^2)^{-1} lives in the slice of p
      const std::complex<double> pi = complexify(p);
      const std::complex<double> q = pi * pi - 2.0 * s.x0() * pi + s.abs2();
      const Multivector qinv = embed_slice(alg, 1.0 / q, SlicePoint::decompose(p).unit());
      const CliffordMatrix rhs =
          (diff.scaled_right(p.to_multivector()) - diff.scaled_left(s.conj().to_multivector()))
              .scaled_right(qinv);
      return (sr * slp - rhs).norm();
    }
    case ResolventEquation::FEq: {
      if (same_sphere(s, p, 1e-9))
        throw SphereViolationError("F-resolvent equation: p not in [s] required");
      const CliffordMatrix frs = resolvent(ResolventKind::FR, 0, s, T);
      const CliffordMatrix flp = resolvent(ResolventKind::FL, 0, p, T);
      const CliffordMatrix srs = resolvent(ResolventKind::SR, 0, s, T);
      const CliffordMatrix slp = resolvent(ResolventKind::SL, 0, p, T);
      CliffordMatrix lhs = frs * slp + srs * flp;
      CliffordMatrix inner(alg, T.d());
      for (int i = 0; i <= h - 2; ++i)
        inner += qcs_inv_pow_op(s, T, h - i - 1) * (srs * slp) * qcs_inv_pow_op(p, T, i + 1);
      for (int i = 0; i <= h - 1; ++i)
        inner += qcs_inv_pow_op(s, T, h - i) * qcs_inv_pow_op(p, T, i + 1);
      lhs += poly::gamma_n(n) * inner;
      const CliffordMatrix diff = frs - flp;
      const std::complex<double> pi = complexify(p);
      const std::complex<double> q = pi * pi - 2.0 * s.x0() * pi + s.abs2();
      const Multivector qinv = embed_slice(alg, 1.0 / q, SlicePoint::decompose(p).unit());
      const CliffordMatrix rhs =
          (diff.scaled_right(p.to_multivector()) - diff.scaled_left(s.conj().to_multivector()))
              .scaled_right(qinv);
      return (lhs - rhs).norm();
    }
  }
  throw std::logic_error("resolvent_equation_check");
}

// ---------------------------------------------------------------------------
// Product rule, two-sidedness, kernel independence

double product_rule_check(const SlicePolynomial& f, const SlicePolynomial& g,
                          const CommutingParavectorOp& T, const ContourSpec& contour) {
  const Algebra& alg = T.algebra();
  const int h = sce_exponent(alg.n());
  if (!f.intrinsic()) throw SideMismatchError("product_rule_check: f must be intrinsic");
  if (g.side() != Side::left) throw SideMismatchError("product_rule_check: g must be left");

  const SlicePolynomial fg = intrinsic_product(f, g);
  const CliffordMatrix lhs = contour_calculus(Calculus::F, 0, fg, T, contour);

  const SlicePolynomial f_left(Side::left, f.coeffs());
  CliffordMatrix rhs = contour_calculus(Calculus::F, 0, f_left, T, contour) *
                       contour_calculus(Calculus::S, 0, g, T, contour);
  rhs += contour_calculus(Calculus::S, 0, f_left, T, contour) *
         contour_calculus(Calculus::F, 0, g, T, contour);
  for (int i = 0; i <= h - 2; ++i)
    rhs += contour_calculus(Calculus::Cliffordian, h - i - 1, f_left, T, contour) *
           contour_calculus(Calculus::Cliffordian, i + 1, g, T, contour);
  for (int i = 0; i <= h - 1; ++i)
    rhs -= contour_calculus(Calculus::Polyharmonic, h - i, f_left, T, contour) *
           contour_calculus(Calculus::Polyharmonic, i + 1, g, T, contour);
  return (lhs - rhs).norm();
}

double intrinsic_two_sided_check(Calculus calc, int param, const SlicePolynomial& f,
                                 const CommutingParavectorOp& T, const ContourSpec& contour) {
  if (!f.intrinsic()) throw SideMismatchError("intrinsic_two_sided_check: f must be intrinsic");
  const SlicePolynomial fl(Side::left, f.coeffs());
  const SlicePolynomial fr(Side::right, f.coeffs());
  const CliffordMatrix a = contour_calculus(calc, param, fl, T, contour);
  const CliffordMatrix b = contour_calculus(calc, param, fr, T, contour);
  return (a - b).norm();
}

double kernel_independence_check(Calculus calc, int param, const SlicePolynomial& f,
                                 const SlicePolynomial& junk, const CommutingParavectorOp& T,
                                 const ContourSpec& contour) {
  const int n = T.algebra().n();
  int bound = 0;
  switch (calc) {
    case Calculus::F:
      bound = n - 2;
      break;
    case Calculus::Polyharmonic:
      bound = 2 * param - 2;
      break;
    case Calculus::Cliffordian:
      bound = 2 * param - 1;
      break;
    case Calculus::Polyanalytic:
      bound = sce_exponent(n) + param - 1;
      break;
    default:
      throw std::invalid_argument("kernel_independence_check: S calculus has a trivial kernel");
  }
  if (junk.degree() > bound)
    throw ParameterRangeError("kernel_independence_check: junk degree exceeds the kernel bound " +
                              std::to_string(bound));
  const CliffordMatrix a = contour_calculus(calc, param, f, T, contour);
  const CliffordMatrix b = contour_calculus(calc, param, f + junk, T, contour);
  return (a - b).norm();
}

// ---------------------------------------------------------------------------
// Monogenic calculus (n = 3)

CliffordMatrix monogenic_resolvent(const Paravector& y, const CommutingParavectorOp& T) {
  const Algebra& alg = T.algebra();
  const int n = alg.n();
  const int h = sce_exponent(n);
  T.require_commuting();
  T.require_symmetric_components();
  T.require_component_zero(0);

  const int d = T.d();
  Eigen::MatrixXd M = y.x0() * y.x0() * Eigen::MatrixXd::Identity(d, d);
  for (int i = 1; i <= n; ++i) {
    const Eigen::MatrixXd diff =
        y.vec()[i - 1] * Eigen::MatrixXd::Identity(d, d) - T.component(i);
    M += diff * diff;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("monogenic_resolvent: eigendecomposition failed");
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin <= 1e-12)
    throw SpectralProximityError("monogenic_resolvent: y on or near the monogenic spectrum");
  Eigen::MatrixXd Minv = es.eigenvectors() *
                         es.eigenvalues().array().pow(-(h + 1.0)).matrix().asDiagonal() *
                         es.eigenvectors().transpose();
  CliffordMatrix pre = T.to_matrix();
  const Multivector ybar = y.conj().to_multivector();
  for (int i = 0; i < d; ++i) pre.at(i, i) += ybar;
  return (1.0 / poly::unit_sphere_area(n + 1)) * (pre * CliffordMatrix::from_real(alg, Minv));
}

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
  x.resize(m);
  w.resize(m);
  for (int i = 0; i < m; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = m * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) {
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        break;
      }
    }
  }
}

}  // namespace

CliffordMatrix monogenic_surface_calc(const std::function<Multivector(const Paravector&)>& ghat,
                                      const CommutingParavectorOp& T, double R,
                                      const SphereGrid& grid) {
  const Algebra& alg = T.algebra();
  if (alg.n() != 3)
    throw HypothesisError("monogenic_surface_calc: implemented for n = 3 only");
  // gamma(T) radii from the vector operator's spectrum spheres
  for (const auto& sph : s_spectrum(T))
    if (std::hypot(sph.t0, sph.rho) > 0.9 * R)
      throw EnclosureError("monogenic_surface_calc: sphere of radius R does not enclose gamma(T)");

  std::vector<double> xc, wc, xt, wt;
  gauss_legendre(grid.n_chi, xc, wc);
  gauss_legendre(grid.n_theta, xt, wt);

  CliffordMatrix acc(alg, T.d());
  for (int ic = 0; ic < grid.n_chi; ++ic) {
    const double chi = 0.5 * std::numbers::pi * (xc[ic] + 1.0);
    const double wchi = wc[ic] * 0.5 * std::numbers::pi;
    for (int it = 0; it < grid.n_theta; ++it) {
      const double th = 0.5 * std::numbers::pi * (xt[it] + 1.0);
      const double wth = wt[it] * 0.5 * std::numbers::pi;
      for (int ip = 0; ip < grid.n_phi; ++ip) {
        const double ph = 2.0 * std::numbers::pi * ip / grid.n_phi;
        const Paravector x(alg, R * std::cos(chi),
                           {R * std::sin(chi) * std::cos(th),
                            R * std::sin(chi) * std::sin(th) * std::cos(ph),
                            R * std::sin(chi) * std::sin(th) * std::sin(ph)});
        const double dS = R * R * R * std::sin(chi) * std::sin(chi) * std::sin(th) * wchi * wth *
                          (2.0 * std::numbers::pi / grid.n_phi);
        const CliffordMatrix G = monogenic_resolvent(x, T);
        const Multivector nu = (1.0 / R * x).to_multivector();
        acc += (G.scaled_right(mv_mul(nu, ghat(x)))) * dS;
      }
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Pointwise diagonal oracle

double pointwise_oracle_check(Calculus calc, int param, const SlicePolynomial& f,
                              const CommutingParavectorOp& T, const ContourSpec& contour) {
  const Algebra& alg = T.algebra();
  const int n = alg.n();
  const int h = sce_exponent(n);
  for (int mu = 0; mu <= n; ++mu)
    if (!T.component(mu).isDiagonal(1e-14))
      throw HypothesisError("pointwise_oracle_check: components must be diagonal");

  const CliffordMatrix got = contour_calculus(calc, param, f, T, contour);

  int order = f.degree();
  switch (calc) {
    case Calculus::S:
      break;
    case Calculus::F:
      order = std::max(order, 2 * h);
      break;
    case Calculus::Polyharmonic:
      order = std::max(order, 2 * param - 1);
      break;
    case Calculus::Cliffordian:
      order = std::max(order, 2 * param);
      break;
    case Calculus::Polyanalytic:
      order = std::max(order, h + param);
      break;
  }

  double worst = 0;
  for (int i = 0; i < T.d(); ++i) {
    std::vector<double> v(n);
    for (int mu = 1; mu <= n; ++mu) v[mu - 1] = T.component(mu)(i, i);
    const Paravector xi(alg, T.component(0)(i, i), std::move(v));
    Jet j = f.to_jet(xi, order);
    switch (calc) {
      case Calculus::S:
        break;
      case Calculus::F:
        j = apply_laplacian_power(j, h);
        break;
      case Calculus::Polyharmonic:
        j = apply_dirac(apply_laplacian_power(j, param - 1), false);
        break;
      case Calculus::Cliffordian:
        j = apply_laplacian_power(j, param);
        break;
      case Calculus::Polyanalytic: {
        for (int t = 0; t < h - param; ++t) j = apply_dirac(j, true);
        j = apply_laplacian_power(j, param);
        break;
      }
    }
    const Multivector want = j.value();
    const double scale = std::max(1.0, want.norm());
    worst = std::max(worst, (got.at(i, i) - want).norm() / scale);
    for (int k = 0; k < T.d(); ++k)
      if (k != i) worst = std::max(worst, got.at(i, k).norm() / scale);
  }
  return worst;
}

}  // namespace cliff
