#include "cliffcalc/kernels.hpp"

#include <cmath>
#include <complex>

#include "cliffcalc/polynomials.hpp"

namespace cliff {

namespace {

using poly::sce_exponent;

double inv_factorial(int k) { return k < 0 ? 0.0 : 1.0 / std::tgamma(k + 1.0); }
double factorial(int k) { return std::tgamma(k + 1.0); }
double binom(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0.0;
  double r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

void check_param(const KernelId& id, int n) {
  const int h = sce_exponent(n);
  switch (id.family) {
    case KernelFamily::H:
      if (id.param < 1 || id.param > h)
        throw ParameterRangeError("H kernel: 1 <= l <= h_n required");
      break;
    case KernelFamily::K:
      if (id.param < 1 || id.param > h - 1)
        throw ParameterRangeError("K kernel: 1 <= alpha <= h_n-1 required (empty at n=3)");
      break;
    case KernelFamily::P:
      if (id.param < 0 || id.param > h - 1)
        throw ParameterRangeError("P kernel: 0 <= l <= h_n-1 required");
      break;
    default:
      break;
  }
}

void check_sphere(const Paravector& s, const Paravector& x) {
  if (same_sphere(x, s, 1e-9))
    throw SphereViolationError("kernel evaluation requires s outside the sphere [x]");
}

Multivector mul_order(Side side, const Multivector& pv_factor, const Multivector& slice_factor) {
  return side == Side::left ? mv_mul(pv_factor, slice_factor) : mv_mul(slice_factor, pv_factor);
}

}  // namespace

Multivector qcs_inv_pow(const Paravector& s, const Paravector& x, int m) {
  check_sphere(s, x);
  const std::complex<double> sigma = complexify(s);
  const std::complex<double> q = sigma * sigma - 2.0 * x.x0() * sigma + x.abs2();
  return embed_slice(s.algebra(), std::pow(q, -m), SlicePoint::decompose(s).unit());
}

Multivector eval_kernel(const KernelId& id, const Paravector& s, const Paravector& x) {
  const Algebra& alg = s.algebra();
  require_same_algebra(alg, x.algebra(), "eval_kernel");
  const int n = alg.n();
  const int h = sce_exponent(n);
  check_param(id, n);

  if (id.family == KernelFamily::Monogenic) {
    if (x.abs() <= 1e-14) throw SphereViolationError("monogenic kernel: x != 0 required");
    return x.conj().to_multivector() * (1.0 / (poly::unit_sphere_area(n + 1) *
                                               std::pow(x.abs(), n + 1.0)));
  }

  check_sphere(s, x);
  const Multivector s_minus_xbar = (s - x.conj()).to_multivector();

  switch (id.family) {
    case KernelFamily::CauchyL:
    case KernelFamily::CauchyR: {
      const Side side = id.family == KernelFamily::CauchyL ? Side::left : Side::right;
      if (id.form == KernelForm::II)
        return mul_order(side, s_minus_xbar, qcs_inv_pow(s, x, 1));
      // form I: -(x^2 - 2 x Re(s) + |s|^2)^{-1} (x - sbar), inverse in the
      // slice of x; the right kernel mirrors the order.
      const std::complex<double> xi = complexify(x);
      const std::complex<double> q = xi * xi - 2.0 * s.x0() * xi + s.abs2();
      const Multivector qinv = embed_slice(alg, -1.0 / q, SlicePoint::decompose(x).unit());
      const Multivector x_minus_sbar = (x - s.conj()).to_multivector();
      return side == Side::left ? mv_mul(qinv, x_minus_sbar) : mv_mul(x_minus_sbar, qinv);
    }
    case KernelFamily::Fn:
      return poly::gamma_n(n) * mul_order(id.side, s_minus_xbar, qcs_inv_pow(s, x, h + 1));
    case KernelFamily::H:
      return poly::sigma_nl(n, id.param) * qcs_inv_pow(s, x, id.param);
    case KernelFamily::K:
      return poly::k_alpha(n, id.param) *
             mul_order(id.side, s_minus_xbar, qcs_inv_pow(s, x, id.param + 1));
    case KernelFamily::P: {
      KernelId f{KernelFamily::Fn, id.side, KernelForm::II, 0};
      const Multivector fk = eval_kernel(f, s, x);
      const Multivector sx0 = (s - Paravector::real(alg, x.x0())).to_multivector();
      Multivector acc = fk;
      for (int i = 0; i < h - id.param; ++i)
        acc = id.side == Side::left ? mv_mul(acc, sx0) : mv_mul(sx0, acc);
      const double c = ((h - id.param) % 2 == 0 ? 1.0 : -1.0) * inv_factorial(h - id.param);
      return acc * c;
    }
    default:
      throw std::logic_error("eval_kernel: unhandled family");
  }
}

double kernel_forms_agree(const Paravector& s, const Paravector& x) {
  double worst = 0;
  for (KernelFamily fam : {KernelFamily::CauchyL, KernelFamily::CauchyR}) {
    KernelId a{fam, Side::left, KernelForm::I, 0};
    KernelId b{fam, Side::left, KernelForm::II, 0};
    worst = std::max(worst, (eval_kernel(a, s, x) - eval_kernel(b, s, x)).norm());
  }
  return worst;
}

Multivector eval_kernel_series(const KernelId& id, const Paravector& s, const Paravector& x,
                               int terms) {
  const Algebra& alg = s.algebra();
  const int n = alg.n();
  const int h = sce_exponent(n);
  check_param(id, n);
  const double ratio = x.abs() / s.abs();
  if (ratio > 0.75)
    throw RatioError("eval_kernel_series: |x|/|s| <= 0.75 required for tail control");

  const auto s_unit = SlicePoint::decompose(s).unit();
  const std::complex<double> sig = complexify(s);
  auto spow = [&](int e) { return embed_slice(alg, std::pow(sig, e), s_unit); };
  auto attach = [&](const Multivector& value, int e) {
    return id.side == Side::left ? mv_mul(value, spow(e)) : mv_mul(spow(e), value);
  };

  Multivector acc(alg);
  switch (id.family) {
    case KernelFamily::CauchyL:
      for (int m = 0; m <= terms; ++m) acc += mv_mul(x.pow(m).to_multivector(), spow(-1 - m));
      break;
    case KernelFamily::CauchyR:
      for (int m = 0; m <= terms; ++m) acc += mv_mul(spow(-1 - m), x.pow(m).to_multivector());
      break;
    case KernelFamily::Fn:
      for (int m = 2 * h; m <= terms; ++m)
        acc += attach(poly::eval_appell(alg, m - 2 * h, x) * binom(m, m - 2 * h), -1 - m);
      acc *= poly::gamma_n(n);
      break;
    case KernelFamily::H: {
      // sigma_{n,l} (sum_k H_k(x) s^{-2-k})^l; H values commute with s powers
      // only inside a common slice, so keep the written order term by term.
      const int l = id.param;
      // build the inner sum's coefficients H_k(x), then convolve l times
      std::vector<Multivector> base;
      for (int k = 0; k <= terms; ++k) base.push_back(poly::eval_polyharm(alg, k, x));
      // coefficients of s^{-2l - k} after l-fold convolution
      std::vector<Multivector> conv = base;
      for (int rep = 1; rep < l; ++rep) {
        std::vector<Multivector> next(terms + 1, Multivector(alg));
        for (int a = 0; a <= terms; ++a)
          for (int b = 0; a + b <= terms; ++b) next[a + b] += mv_mul(conv[a], base[b]);
        conv = std::move(next);
      }
      for (int k = 0; k <= terms; ++k) acc += mv_mul(conv[k], spow(-2 * l - k));
      acc *= poly::sigma_nl(n, l);
      break;
    }
    case KernelFamily::K: {
      const int a_ = id.param;
      for (int k = 2 * a_; k <= terms; ++k) {
        Multivector term(alg);
        for (int l = 0; l <= h - a_; ++l)
          for (int v = 0; v <= l; ++v) {
            const int deg = k - 2 * a_ - 2 * l + v;
            if (deg < 0) continue;
            const double kap = binom(h - a_, l) * binom(l, v) * binom(k + 2 * h - 2 * a_ - 2 * l + v, deg);
            term += poly::eval_appell(alg, deg, x) *
                    (kap * std::pow(-2.0 * x.x0(), v) * std::pow(x.abs2(), l - v));
          }
        acc += attach(term, -1 - k);
      }
      acc *= poly::k_alpha(n, a_);
      break;
    }
    case KernelFamily::P: {
      const int l = id.param;
      for (int k = h + l; k <= terms; ++k) {
        Multivector term(alg);
        for (int i = 0; i <= h - l; ++i) {
          const int deg = k - i - l - h;
          if (deg < 0) continue;
          double kt = binom(h - l, i) * binom(k - i - l + h, deg);
          if ((i + h - l) % 2 == 1) kt = -kt;
          term += poly::eval_appell(alg, deg, x) * (kt * std::pow(x.x0(), i));
        }
        acc += attach(term, -1 - k);
      }
      acc *= poly::gamma_n(n) * inv_factorial(h - l);
      break;
    }
    default:
      throw std::invalid_argument("eval_kernel_series: no series for this family");
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Kernel jets

namespace {

Jet qcs_recip_pow_jet(const Paravector& s, const Paravector& center, int order, int m) {
  return jet_qcs(center.algebra(), s, center, order).recip().pow(m).promote();
}

Jet s_minus_xbar_jet(const Paravector& s, const Paravector& center, int order) {
  const Algebra& alg = center.algebra();
  Jet j = jet_conj_variable(alg, center, order);
  j *= -1.0;
  return j + jet_constant(alg, center, order, s.to_multivector());
}

Jet s_minus_x0_jet(const Paravector& s, const Paravector& center, int order) {
  const Algebra& alg = center.algebra();
  Jet j(alg, center, order);
  j.set_coeff(0, (s - Paravector::real(alg, center.x0())).to_multivector());
  if (order >= 1) {
    std::vector<std::uint8_t> a(alg.n() + 1, 0);
    a[0] = 1;
    j.coeff(j.table().index_of(a))[0] = -1.0;
  }
  return j;
}

}  // namespace

Jet jet_of_kernel(const KernelId& id, const Paravector& s, const Paravector& center, int order) {
  const Algebra& alg = center.algebra();
  const int n = alg.n();
  const int h = sce_exponent(n);
  check_param(id, n);

  auto mul_side = [&](const Jet& pv_jet, const Jet& slice_jet) {
    return id.side == Side::left ? jet_mul(pv_jet, slice_jet) : jet_mul(slice_jet, pv_jet);
  };

  switch (id.family) {
    case KernelFamily::CauchyL:
      return jet_mul(s_minus_xbar_jet(s, center, order), qcs_recip_pow_jet(s, center, order, 1));
    case KernelFamily::CauchyR:
      return jet_mul(qcs_recip_pow_jet(s, center, order, 1), s_minus_xbar_jet(s, center, order));
    case KernelFamily::Fn:
      return mul_side(s_minus_xbar_jet(s, center, order),
                      qcs_recip_pow_jet(s, center, order, h + 1)) *
             poly::gamma_n(n);
    case KernelFamily::H:
      return qcs_recip_pow_jet(s, center, order, id.param) * poly::sigma_nl(n, id.param);
    case KernelFamily::K:
      return mul_side(s_minus_xbar_jet(s, center, order),
                      qcs_recip_pow_jet(s, center, order, id.param + 1)) *
             poly::k_alpha(n, id.param);
    case KernelFamily::P: {
      KernelId f{KernelFamily::Fn, id.side, KernelForm::II, 0};
      Jet acc = jet_of_kernel(f, s, center, order);
      const Jet sx0 = s_minus_x0_jet(s, center, order);
      for (int i = 0; i < h - id.param; ++i)
        acc = id.side == Side::left ? jet_mul(acc, sx0) : jet_mul(sx0, acc);
      const double c = ((h - id.param) % 2 == 0 ? 1.0 : -1.0) * inv_factorial(h - id.param);
      return acc * c;
    }
    default:
      throw std::invalid_argument("jet_of_kernel: unsupported family");
  }
}

Multivector dbar_power_closed(int beta, const Paravector& s, const Paravector& x) {
  const Algebra& alg = s.algebra();
  const int h = sce_exponent(alg.n());
  check_sphere(s, x);
  const Multivector sxb = (s - x.conj()).to_multivector();
  auto q = [&](int m) { return qcs_inv_pow(s, x, m); };
  auto sx0pow = [&](int e) {
    // (s - x0)^e lives in the slice of s
    const std::complex<double> z = complexify(s) - std::complex<double>(x.x0(), 0.0);
    return embed_slice(alg, std::pow(z, e), SlicePoint::decompose(s).unit());
  };

  Multivector acc(alg);
  if (beta % 2 == 1) {
    const int m = (beta - 1) / 2;
    Multivector first(alg);
    for (int j = 0; j <= m; ++j)
      first += mv_mul(sx0pow(2 * j), q(m + j + 1)) *
               (std::pow(2.0, 2 * j) * factorial(m + j) * binom(m + j, 2 * j) *
                ((h - m - j - 1) >= 0 ? factorial(h - m - j - 1) : 0.0));
    Multivector second(alg);
    for (int j = 0; j <= m - 1; ++j)
      second += mv_mul(sx0pow(2 * j + 1), q(m + j + 2)) *
                (std::pow(2.0, 2 * j + 1) * factorial(m + j + 1) * binom(m + j + 1, 2 * j + 1) *
                 ((h - m - j - 2) >= 0 ? factorial(h - m - j - 2) : 0.0));
    const double pref = (h - 2 * m - 2) >= 0 ? std::pow(2.0, 2 * m + 1) * inv_factorial(h - 2 * m - 2)
                                             : 0.0;
    acc = (first + mv_mul(sxb, second)) * pref;
    acc += mv_mul(sxb, mv_mul(sx0pow(2 * m + 1), q(2 * m + 2))) *
           (std::pow(4.0, 2 * m + 1) * factorial(2 * m + 1));
  } else {
    const int m = beta / 2;
    Multivector first(alg);
    for (int j = 0; j <= m - 1; ++j)
      first += mv_mul(sx0pow(2 * j + 1), q(m + j + 1)) *
               (std::pow(2.0, 2 * j + 1) * factorial(m + j) * binom(m + j, 2 * j + 1) *
                ((h - m - j - 1) >= 0 ? factorial(h - m - j - 1) : 0.0));
    // the C(m+j, 2j) family runs through j = m-1; its top term carries a
    // (h_n-2)!-type factor and only survives for h_n >= 3
    Multivector second(alg);
    for (int j = 0; j <= m - 1; ++j)
      second += mv_mul(sx0pow(2 * j), q(m + j + 1)) *
                (std::pow(2.0, 2 * j) * factorial(m + j) * binom(m + j, 2 * j) *
                 ((h - m - j - 1) >= 0 ? factorial(h - m - j - 1) : 0.0));
    const double pref = (h - 2 * m - 1) >= 0 ? std::pow(2.0, 2 * m) * inv_factorial(h - 2 * m - 1)
                                             : 0.0;
    acc = (first + mv_mul(sxb, second)) * pref;
    acc += mv_mul(sxb, mv_mul(sx0pow(2 * m), q(2 * m + 1))) *
           (std::pow(4.0, 2 * m) * factorial(2 * m));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Differential identity verification

const std::vector<std::string>& differential_identity_names() {
  static const std::vector<std::string> names{
      "dirac1",      "dirac2",   "laplace_power", "harm_kernel",  "fueter_sce",
      "hol_cliff",   "poly_kernel", "poly_kernel_right", "dbar_power", "leibniz1",
      "regularity_F", "regularity_H", "regularity_P", "regularity_K"};
  return names;
}

namespace {

double jet_defect(const Jet& got, const Jet& want) {
  const double scale = std::max(1.0, want.max_coeff_norm());
  Jet d = got;
  d -= want;
  return d.max_coeff_norm() / scale;
}

double jet_null_defect(const Jet& got, double scale) {
  return got.max_coeff_norm() / std::max(1.0, scale);
}

}  // namespace

double verify_differential_identity(const std::string& name, const Paravector& s,
                                    const Paravector& x, int param) {
  const Algebra& alg = s.algebra();
  const int n = alg.n();
  const int h = sce_exponent(n);
  check_sphere(s, x);

  // Enough output order to make the comparison a genuine jet identity, not
  // a single point value.
  const int keep = 2;

  if (name == "dirac1") {
    const int m = param;
    const int ord = keep + 1;
    Jet src = jet_mul(s_minus_xbar_jet(s, x, ord),
                      m == 0 ? jet_constant(alg, x, ord, Multivector::scalar(alg, 1.0))
                             : qcs_recip_pow_jet(s, x, ord, m));
    Jet got = apply_dirac(src, false);
    Jet want = (m == 0 ? jet_constant(alg, x, ord, Multivector::scalar(alg, 1.0))
                       : qcs_recip_pow_jet(s, x, ord, m))
                   .truncated(ord - 1) *
               (2.0 * (m - h - 1));
    return jet_defect(got, want);
  }
  if (name == "dirac2") {
    const int m = param;
    const int ord = keep + 1;
    Jet got = apply_dirac(qcs_recip_pow_jet(s, x, ord, m), true);
    Jet want = jet_mul(s_minus_xbar_jet(s, x, ord), qcs_recip_pow_jet(s, x, ord, m + 1))
                   .truncated(ord - 1) *
               (2.0 * m);
    return jet_defect(got, want);
  }
  if (name == "laplace_power") {
    const int l = param;
    if (l < 0 || l > h) throw ParameterRangeError("laplace_power: 0 <= l <= h_n");
    const int ord = keep + 2 * l;
    Jet got = apply_laplacian_power(
        jet_of_kernel({KernelFamily::CauchyL, Side::left, KernelForm::II, 0}, s, x, ord), l);
    const double coef =
        std::pow(4.0, l) * factorial(l) *
        ((l % 2 == 0 ? 1.0 : -1.0) * factorial(h) / factorial(h - l));
    Jet want = jet_mul(s_minus_xbar_jet(s, x, ord), qcs_recip_pow_jet(s, x, ord, l + 1))
                   .truncated(ord - 2 * l) *
               coef;
    return jet_defect(got, want);
  }
  if (name == "harm_kernel") {
    const int l = param;
    if (l < 1 || l > h) throw ParameterRangeError("harm_kernel: 1 <= l <= h_n");
    const int ord = keep + 2 * l - 1;
    Jet got = apply_dirac(
        apply_laplacian_power(
            jet_of_kernel({KernelFamily::CauchyL, Side::left, KernelForm::II, 0}, s, x, ord),
            l - 1),
        false);
    Jet want = jet_of_kernel({KernelFamily::H, Side::left, KernelForm::II, l}, s, x,
                             ord - 2 * (l - 1) - 1);
    return jet_defect(got, want);
  }
  if (name == "fueter_sce") {
    const int ord = keep + 2 * h;
    Jet got = apply_laplacian_power(
        jet_of_kernel({KernelFamily::CauchyL, Side::left, KernelForm::II, 0}, s, x, ord), h);
    Jet want = jet_of_kernel({KernelFamily::Fn, Side::left, KernelForm::II, 0}, s, x, keep);
    return jet_defect(got, want);
  }
  if (name == "hol_cliff") {
    const int a = param;
    if (a < 1 || a > h - 1) throw ParameterRangeError("hol_cliff: 1 <= alpha <= h_n-1");
    const int ord = keep + 2 * a;
    Jet got = apply_laplacian_power(
        jet_of_kernel({KernelFamily::CauchyL, Side::left, KernelForm::II, 0}, s, x, ord), a);
    Jet want = jet_of_kernel({KernelFamily::K, Side::left, KernelForm::II, a}, s, x, keep);
    return jet_defect(got, want);
  }
  if (name == "poly_kernel" || name == "poly_kernel_right") {
    const int l = param;
    if (l < 0 || l > h - 1) throw ParameterRangeError("poly_kernel: 0 <= l <= h_n-1");
    const Side side = name == "poly_kernel" ? Side::left : Side::right;
    const int ord = keep + h + l;
    const KernelFamily cauchy = side == Side::left ? KernelFamily::CauchyL : KernelFamily::CauchyR;
    Jet src = jet_of_kernel({cauchy, side, KernelForm::II, 0}, s, x, ord);
    for (int i = 0; i < h - l; ++i) src = apply_dirac(src, true, side);
    Jet got = apply_laplacian_power(src, l);
    Jet want = jet_of_kernel({KernelFamily::P, side, KernelForm::II, l}, s, x, keep);
    return jet_defect(got, want);
  }
  if (name == "dbar_power") {
    const int beta = param;
    if (beta < 1 || beta > h) throw ParameterRangeError("dbar_power: 1 <= beta <= h_n");
    const int ord = beta;  // compare values only: closed form is a point formula
    Jet src = jet_of_kernel({KernelFamily::CauchyL, Side::left, KernelForm::II, 0}, s, x, ord);
    for (int i = 0; i < beta; ++i) src = apply_dirac(src, true);
    const Multivector want = dbar_power_closed(beta, s, x);
    const double scale = std::max(1.0, want.norm());
    return (src.value() - want).norm() / scale;
  }
  if (name == "leibniz1") {
    const int a = std::max(param, 1);
    const int ord = keep + 1;
    Jet got = apply_dirac(
        jet_mul(s_minus_xbar_jet(s, x, ord), qcs_recip_pow_jet(s, x, ord, a)), true);
    Jet want = qcs_recip_pow_jet(s, x, ord - 1, a) * (2.0 * (h - a));
    want += jet_mul(s_minus_xbar_jet(s, x, ord - 1),
                    jet_mul(s_minus_x0_jet(s, x, ord - 1), qcs_recip_pow_jet(s, x, ord - 1, a + 1))) *
            (4.0 * a);
    return jet_defect(got, want);
  }
  if (name == "regularity_F") {
    const int ord = keep + 1;
    Jet f = jet_of_kernel({KernelFamily::Fn, Side::left, KernelForm::II, 0}, s, x, ord);
    return jet_null_defect(apply_dirac(f, false), f.max_coeff_norm());
  }
  if (name == "regularity_H") {
    const int l = param;
    const int ord = keep + 2 * (h - l + 1);
    Jet f = jet_of_kernel({KernelFamily::H, Side::left, KernelForm::II, l}, s, x, ord);
    return jet_null_defect(apply_laplacian_power(f, h - l + 1), f.max_coeff_norm());
  }
  if (name == "regularity_P") {
    const int l = param;
    const int ord = keep + h - l + 1;
    Jet f = jet_of_kernel({KernelFamily::P, Side::left, KernelForm::II, l}, s, x, ord);
    Jet d = f;
    for (int i = 0; i < h - l + 1; ++i) d = apply_dirac(d, false);
    return jet_null_defect(d, f.max_coeff_norm());
  }
  if (name == "regularity_K") {
    const int a = param;
    const int ord = keep + 2 * (h - a) + 1;
    Jet f = jet_of_kernel({KernelFamily::K, Side::left, KernelForm::II, a}, s, x, ord);
    return jet_null_defect(apply_laplacian_power(apply_dirac(f, false), h - a),
                           f.max_coeff_norm());
  }
  throw std::invalid_argument("verify_differential_identity: unknown name '" + name + "'");
}

// ---------------------------------------------------------------------------
// Slice regularity in s

namespace {

void split_alpha_beta(const KernelId& id, const Paravector& x, const SlicePoint& at,
                      Multivector& alpha, Multivector& beta) {
  const Algebra& alg = x.algebra();
  const Multivector plus = eval_kernel(id, at.realize(), x);
  std::vector<double> neg(at.unit());
  for (double& t : neg) t = -t;
  const Multivector minus =
      eval_kernel(id, SlicePoint(alg, at.u(), at.v(), neg).realize(), x);
  alpha = (plus + minus) * 0.5;
  const Multivector odd = (plus - minus) * 0.5;
  const Multivector unit_mv = SlicePoint(alg, 0.0, 1.0, at.unit()).realize().to_multivector();
  // Left kernels are right slice hyperholomorphic in s (split alpha + beta I,
  // beta = odd * (-I)); right kernels carry the unit on the left.
  const bool unit_on_left = id.family == KernelFamily::CauchyR ||
                            (id.side == Side::right && id.family != KernelFamily::CauchyL);
  if (unit_on_left)
    beta = mv_mul(unit_mv, odd) * -1.0;
  else
    beta = mv_mul(odd, unit_mv) * -1.0;
}

}  // namespace

double verify_slice_regularity_in_s(const KernelId& id, const Paravector& x, const SlicePoint& s0,
                                    double step) {
  const Algebra& alg = x.algebra();
  auto ab = [&](double du, double dv, Multivector& a, Multivector& b) {
    SlicePoint at(alg, s0.u() + du, s0.v() + dv, s0.unit());
    split_alpha_beta(id, x, at, a, b);
  };
  Multivector au_p(alg), bu_p(alg), au_m(alg), bu_m(alg);
  Multivector av_p(alg), bv_p(alg), av_m(alg), bv_m(alg);
  ab(step, 0, au_p, bu_p);
  ab(-step, 0, au_m, bu_m);
  ab(0, step, av_p, bv_p);
  ab(0, -step, av_m, bv_m);
  const Multivector da_du = (au_p - au_m) * (0.5 / step);
  const Multivector db_du = (bu_p - bu_m) * (0.5 / step);
  const Multivector da_dv = (av_p - av_m) * (0.5 / step);
  const Multivector db_dv = (bv_p - bv_m) * (0.5 / step);
  return std::max((da_du - db_dv).norm(), (da_dv + db_du).norm());
}

double slice_split_nonreal(const KernelId& id, const Paravector& x, const SlicePoint& s0) {
  Multivector a(x.algebra()), b(x.algebra());
  split_alpha_beta(id, x, s0, a, b);
  double worst = 0;
  for (const Multivector* m : {&a, &b}) {
    Multivector rest = *m;
    rest[0] = 0.0;
    worst = std::max(worst, rest.norm());
  }
  return worst;
}

}  // namespace cliff
