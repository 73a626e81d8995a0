#include "cliffcalc/polynomials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cliffcalc/jet.hpp"

namespace cliff {

// ---------------------------------------------------------------------------
// Rational

namespace {

using Int = Rational::Int;

Int igcd(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw RationalOverflowError("rational multiply overflow");
  return r;
}

Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw RationalOverflowError("rational add overflow");
  return r;
}

}  // namespace

Rational::Rational(Int num, Int den) : num_(num), den_(den) {
  if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
  reduce();
}

void Rational::reduce() {
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  const Int g = igcd(num_, den_);
  num_ /= g;
  den_ /= g;
}

Rational Rational::factorial(int n) {
  if (n < 0) throw std::invalid_argument("Rational::factorial: negative");
  Rational r(1);
  for (int i = 2; i <= n; ++i) r *= Rational(i);
  return r;
}

Rational Rational::binomial(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  Rational r(1);
  for (int i = 0; i < k; ++i) {
    r *= Rational(n - i);
    r /= Rational(i + 1);
  }
  return r;
}

Rational Rational::pochhammer(long long a, int m) {
  Rational r(1);
  for (int i = 0; i < m; ++i) r *= Rational(a + i);
  return r;
}

Rational Rational::pochhammer_neg(int h, int l) {
  if (l > h) {
    // Gamma(h-l+1) has a pole: (-h)_l genuinely vanishes past l = h
    return Rational(0);
  }
  Rational r = factorial(h) / factorial(h - l);
  return (l % 2 == 0) ? r : -r;
}

Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  const Int g = igcd(den_, o.den_);
  const Int lhs = checked_mul(num_, o.den_ / g);
  const Int rhs = checked_mul(o.num_, den_ / g);
  num_ = checked_add(lhs, rhs);
  den_ = checked_mul(den_ / g, o.den_);
  reduce();
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += (-o); }

Rational& Rational::operator*=(const Rational& o) {
  const Int g1 = igcd(num_, o.den_);
  const Int g2 = igcd(o.num_, den_);
  num_ = checked_mul(num_ / g1, o.num_ / g2);
  den_ = checked_mul(den_ / g2, o.den_ / g1);
  reduce();
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::invalid_argument("Rational: division by zero");
  return *this *= Rational(o.den_, o.num_);
}

Rational Rational::abs() const { return num_ < 0 ? -*this : *this; }

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::to_string() const {
  auto fmt = [](Int v) {
    if (v == 0) return std::string("0");
    bool neg = v < 0;
    if (neg) v = -v;
    std::string s;
    while (v > 0) {
      s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
      v /= 10;
    }
    return neg ? "-" + s : s;
  };
  return den_ == 1 ? fmt(num_) : fmt(num_) + "/" + fmt(den_);
}

}  // namespace cliff

namespace cliff::poly {

double gamma_n(int n) { return gamma_n_exact(n).to_double(); }

Rational gamma_n_exact(int n) {
  const int h = sce_exponent(n);
  // Gamma((n+1)/2) = h! for odd n
  Rational g = Rational::factorial(h) * Rational::factorial(h);
  for (int i = 0; i < n - 1; ++i) g *= Rational(2);
  return (h % 2 == 0) ? g : -g;
}

Rational sigma_nl_exact(int n, int l) {
  const int h = sce_exponent(n);
  if (l < 1 || l > h) throw std::invalid_argument("sigma_nl: 1 <= l <= h_n required");
  Rational r = Rational::factorial(l - 1) * Rational::pochhammer_neg(h, l);
  for (int i = 0; i < 2 * l - 1; ++i) r *= Rational(2);
  return r;
}

double sigma_nl(int n, int l) { return sigma_nl_exact(n, l).to_double(); }

Rational k_alpha_exact(int n, int alpha) {
  const int h = sce_exponent(n);
  if (alpha < 1 || alpha > h - 1)
    throw std::invalid_argument("k_alpha: 1 <= alpha <= h_n-1 required");
  Rational r = Rational::factorial(alpha) * Rational::pochhammer_neg(h, alpha);
  for (int i = 0; i < alpha; ++i) r *= Rational(4);
  return r;
}

double k_alpha(int n, int alpha) { return k_alpha_exact(n, alpha).to_double(); }

double c_mn(int n, int m) {
  const int h = sce_exponent(n);
  double r = 1.0;
  // m! (2h)! / (m+2h)! = 1 / binom(m+2h, m) / ... computed stably
  for (int i = 1; i <= m; ++i) r *= i / static_cast<double>(2 * h + i);
  return r / (2.0 * std::numbers::pi * gamma_n(n));
}

double unit_sphere_area(int dim) {
  return 2.0 * std::pow(std::numbers::pi, dim / 2.0) / std::tgamma(dim / 2.0);
}

void constants_self_check() {
  auto expect = [](bool ok, const char* what) {
    if (!ok) throw std::logic_error(std::string("constants_self_check failed: ") + what);
  };
  expect(gamma_n(3) == -4.0, "gamma_3 = -4");
  expect(gamma_n(5) == 64.0, "gamma_5 = 64");
  expect(sigma_nl(3, 1) == -2.0, "sigma_{3,1} = -2");
  expect(Rational::pochhammer_neg(2, 1).to_double() == -2.0, "(-2)_1 = -2");
  expect(Rational::pochhammer_neg(2, 2).to_double() == 2.0, "(-2)_2 = 2");
  for (int n : {5, 7, 9}) {
    const int h = sce_exponent(n);
    for (int i = 0; i + 2 <= h; ++i)
      expect((k_alpha_exact(n, h - i - 1) * k_alpha_exact(n, i + 1) - gamma_n_exact(n)).is_zero(),
             "k_{h-i-1} k_{i+1} = gamma_n");
    for (int i = 0; i < h; ++i)
      expect((sigma_nl_exact(n, h - i) * sigma_nl_exact(n, i + 1) + gamma_n_exact(n)).is_zero(),
             "sigma sigma = -gamma_n");
  }
}

namespace {

// binom(k,l) (a)_{k-l} (b)_l / (c)_k with numerator and denominator factors
// interleaved so the running fraction stays small
Rational coeff_ratio(int k, int l, long long a, long long b, long long c) {
  Rational r = Rational::binomial(k, l);
  for (int i = 0; i < k; ++i) {
    if (i < k - l) r *= Rational(a + i);
    if (i < l) r *= Rational(b + i);
    r /= Rational(c + i);
  }
  return r;
}

}  // namespace

Rational appell_coeff_exact(int n, int k, int l) {
  const int h = sce_exponent(n);
  return coeff_ratio(k, l, h + 1, h, n);
}

Rational harmonic_coeff_exact(int n, int k, int l) {
  const int h = sce_exponent(n);
  return coeff_ratio(k, l, h, h, n - 1);
}

// lgamma route for large k where the 128-bit fractions overflow; relative
// error ~1e-13, well inside every series tolerance
double appell_coeff(int n, int k, int l) {
  if (k <= 30) return appell_coeff_exact(n, k, l).to_double();
  const int h = sce_exponent(n);
  const double ln = std::lgamma(k + 1.0) - std::lgamma(l + 1.0) - std::lgamma(k - l + 1.0) +
                    std::lgamma(h + 1.0 + k - l) - std::lgamma(h + 1.0) +
                    std::lgamma(h + 0.0 + l) - std::lgamma(h + 0.0) -
                    (std::lgamma(n + 0.0 + k) - std::lgamma(n + 0.0));
  return std::exp(ln);
}

double harmonic_coeff(int n, int k, int l) {
  if (k <= 30) return harmonic_coeff_exact(n, k, l).to_double();
  const int h = sce_exponent(n);
  const double ln = std::lgamma(k + 1.0) - std::lgamma(l + 1.0) - std::lgamma(k - l + 1.0) +
                    std::lgamma(h + 0.0 + k - l) - std::lgamma(h + 0.0) +
                    std::lgamma(h + 0.0 + l) - std::lgamma(h + 0.0) -
                    (std::lgamma(n - 1.0 + k) - std::lgamma(n - 1.0));
  return std::exp(ln);
}

namespace {

// sum_l c_l z^{k-l} zbar^l in the slice plane of x
Multivector slice_pair_sum(const Algebra& alg, int k, const Paravector& x,
                           double (*coef)(int, int, int)) {
  if (k < 0) return Multivector(alg);
  const std::complex<double> z = complexify(x);
  std::complex<double> acc = 0;
  for (int l = 0; l <= k; ++l)
    acc += coef(alg.n(), k, l) * std::pow(z, k - l) * std::pow(std::conj(z), l);
  return embed_slice(alg, acc, SlicePoint::decompose(x).unit());
}

}  // namespace

Multivector eval_appell(const Algebra& alg, int k, const Paravector& x) {
  return slice_pair_sum(alg, k, x, &appell_coeff);
}

Multivector eval_harmonic(const Algebra& alg, int k, const Paravector& x) {
  return slice_pair_sum(alg, k, x, &harmonic_coeff);
}

Multivector eval_polyharm(const Algebra& alg, int k, const Paravector& x) {
  if (k < 0) return Multivector(alg);
  const std::complex<double> z = complexify(x);
  std::complex<double> acc = 0;
  for (int l = 0; l <= k; ++l) acc += std::pow(z, k - l) * std::pow(std::conj(z), l);
  return embed_slice(alg, acc, SlicePoint::decompose(x).unit());
}

Multivector eval_fueter(const Algebra& alg, std::span<const int> kvec, const Paravector& x) {
  if (static_cast<int>(kvec.size()) != alg.n())
    throw std::invalid_argument("eval_fueter: multi-index must have n entries");
  std::vector<int> seq;
  for (int j = 0; j < alg.n(); ++j)
    for (int c = 0; c < kvec[j]; ++c) seq.push_back(j);
  if (seq.empty()) return Multivector::scalar(alg, 1.0);

  std::vector<Multivector> z;
  for (int j = 0; j < alg.n(); ++j) {
    Multivector zj(alg);
    zj[0] = x.vec()[j];
    zj[std::size_t{1} << j] = -x.x0();
    z.push_back(zj);
  }
  std::sort(seq.begin(), seq.end());
  Multivector acc(alg);
  std::size_t perms = 0;
  do {
    Multivector term = z[seq[0]];
    for (std::size_t i = 1; i < seq.size(); ++i) term = mv_mul(term, z[seq[i]]);
    acc += term;
    ++perms;
  } while (std::next_permutation(seq.begin(), seq.end()));
  // (1/k!) over all k! orderings = average over the distinct arrangements
  return acc * (1.0 / perms);
}

Multivector appell_from_fueter(const Algebra& alg, int k, const Paravector& x) {
  if (k == 0) return Multivector::scalar(alg, 1.0);
  // gradients of P_k^n at 0 from its exact jet
  const Jet pjet = [&] {
    Jet j(alg, Paravector::zero(alg), k);
    const Jet xj = jet_variable(alg, Paravector::zero(alg), k);
    const Jet xbj = jet_conj_variable(alg, Paravector::zero(alg), k);
    for (int l = 0; l <= k; ++l) {
      Jet term = jet_constant(alg, Paravector::zero(alg), k,
                              Multivector::scalar(alg, appell_coeff(alg.n(), k, l)));
      for (int i = 0; i < k - l; ++i) term = jet_mul(term, xj);
      for (int i = 0; i < l; ++i) term = jet_mul(term, xbj);
      j += term;
    }
    return j;
  }();

  // enumerate kvec with |kvec| = k over the n vector variables
  Multivector acc(alg);
  std::vector<int> kvec(alg.n(), 0);
  std::vector<std::uint8_t> alpha(alg.n() + 1, 0);
  auto rec = [&](auto&& self, int var, int rem) -> void {
    if (var == alg.n() - 1) {
      kvec[var] = rem;
      alpha[0] = 0;
      double kfact = 1;
      for (int j = 0; j < alg.n(); ++j) {
        alpha[j + 1] = static_cast<std::uint8_t>(kvec[j]);
        kfact *= std::tgamma(kvec[j] + 1.0);
      }
      // Taylor coefficient c_alpha = (d^alpha P)(0)/alpha!  =>  grad = c*k!
      const Multivector grad = pjet.coeff_mv(pjet.table().index_of(alpha)) * kfact;
      acc += mv_mul(eval_fueter(alg, kvec, x), grad) * (1.0 / kfact);
      return;
    }
    for (int e = rem; e >= 0; --e) {
      kvec[var] = e;
      self(self, var + 1, rem - e);
    }
  };
  rec(rec, 0, k);
  return acc;
}

// ---------------------------------------------------------------------------
// Identity suite

namespace {

struct Worst {
  Rational exact{0};
  double fl = 0.0;
  std::string tuple;
  void feed(const Rational& defect, double fdefect, std::string t) {
    if (defect.abs().to_double() > exact.abs().to_double() || fdefect > fl) {
      if (defect.abs().to_double() > exact.abs().to_double()) exact = defect;
      if (fdefect > fl) {
        fl = fdefect;
        tuple = std::move(t);
      }
    }
  }
  void feed_float(double fdefect, std::string t) {
    if (fdefect > fl) {
      fl = fdefect;
      tuple = std::move(t);
    }
  }
};

std::string tup(std::initializer_list<int> v) {
  std::string s = "(";
  bool first = true;
  for (int t : v) {
    if (!first) s += ",";
    s += std::to_string(t);
    first = false;
  }
  return s + ")";
}

Paravector random_paravector(const Algebra& alg, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(alg.n());
  for (double& t : v) t = g(rng);
  return Paravector(alg, g(rng), std::move(v));
}

}  // namespace

const std::vector<std::string>& identity_names() {
  static const std::vector<std::string> names{"lem1_part1", "lem1_part2", "prop1", "seriesw",
                                              "summ1",      "jacobi",     "rell",  "constant_pairs"};
  return names;
}

IdentityReport identity_suite(const std::string& name, int n, int kmax, std::uint64_t seed) {
  const int h = sce_exponent(n);
  const Algebra& alg = Algebra::get(n);
  IdentityReport rep;
  rep.identity = name;
  rep.n = n;
  Worst w;

  if (name == "lem1_part1") {
    rep.exact_route = true;
    for (int m = 2 * h - 1; m <= kmax; ++m) {
      const int l = m - 2 * h + 1;
      if (l < 0) continue;
      Rational lhs = appell_coeff_exact(2 * h + 1, l, l) * Rational::binomial(m + 1, m + 1 - 2 * h);
      Rational rhs = Rational::binomial(m, 2 * h - 1) * harmonic_coeff_exact(2 * h + 1, l, l);
      w.feed(lhs - rhs, (lhs - rhs).abs().to_double(), tup({m}));
    }
  } else if (name == "lem1_part2") {
    rep.exact_route = true;
    for (int m = 2 * h; m <= kmax; ++m) {
      for (int l = 0; l <= m - 2 * h; ++l) {
        Rational lhs =
            appell_coeff_exact(2 * h + 1, m - 2 * h + 1, l) * Rational::binomial(m + 1, m + 1 - 2 * h) -
            appell_coeff_exact(2 * h + 1, m - 2 * h, l) * Rational::binomial(m, m - 2 * h);
        Rational rhs =
            Rational::binomial(m, 2 * h - 1) * harmonic_coeff_exact(2 * h + 1, m - 2 * h + 1, l);
        w.feed(lhs - rhs, (lhs - rhs).abs().to_double(), tup({m, l}));
      }
    }
  } else if (name == "prop1") {
    // Delta^h x^{m+1} - x Delta^h x^m = 2h D Delta^{h-1} x^m; left side by
    // jets, right side by the closed harmonic form.
    std::mt19937_64 rng(seed);
    for (int m = 2 * h - 1; m <= std::min(kmax, 2 * h + 5); ++m) {
      const Paravector x = random_paravector(alg, rng, 0.6);
      const Multivector lhs_a = apply_laplacian_power(jet_pv_power(alg, x, 2 * h, m + 1), h).value();
      const Multivector lhs_b = apply_laplacian_power(jet_pv_power(alg, x, 2 * h, m), h).value();
      const Multivector lhs = lhs_a - mv_mul(x.to_multivector(), lhs_b);
      const double c = 2.0 * h * gamma_n(n) / std::tgamma(2.0 * h + 1) *
                       std::tgamma(m + 1.0) / std::tgamma(m - 2.0 * h + 2.0);
      const Multivector rhs = eval_harmonic(alg, m - 2 * h + 1, x) * c;
      // the difference cancels the large Delta^h values; scale by them
      const double scale = std::max({1.0, rhs.norm(), lhs_a.norm(), lhs_b.norm()});
      w.feed_float((lhs - rhs).norm() / scale, tup({m}));
    }
  } else if (name == "seriesw") {
    rep.exact_route = true;
    for (int l = 1; l <= h; ++l) {
      for (int k = 2 * l - 1; k <= kmax; ++k) {
        Rational sum(0);
        for (int a = 0; a <= h - l; ++a)
          for (int b = 0; b <= a; ++b) {
            Rational K = Rational::binomial(2 * h - 2 * a + b - 2 * l + k, 2 * h - 1) *
                         Rational::binomial(h - l, a) * Rational::binomial(a, b);
            Rational p2(1);
            for (int i = 0; i < b; ++i) p2 *= Rational(-2);
            sum += K * p2;
          }
        Rational rhs = Rational::factorial(k) /
                       (Rational::factorial(2 * l - 1) * Rational::factorial(k - 2 * l + 1));
        w.feed(sum - rhs, (sum - rhs).abs().to_double(), tup({l, k}));
      }
    }
  } else if (name == "summ1") {
    rep.exact_route = true;
    if (h - 1 < 1) {
      rep.skipped = true;
      rep.worst_tuple = "empty: 1 <= alpha <= h_n-1 with h_n = 1";
      return rep;
    }
    for (int a = 1; a <= h - 1; ++a) {
      for (int k = 2 * a; k <= kmax; ++k) {
        Rational sum(0);
        for (int l = 0; l <= h - a; ++l)
          for (int v = 0; v <= l; ++v) {
            if (k - 2 * a - 2 * l + v < 0) continue;
            Rational kap = Rational::binomial(h - a, l) * Rational::binomial(l, v) *
                           Rational::binomial(k + 2 * h - 2 * a - 2 * l + v, k - 2 * a - 2 * l + v);
            Rational p2(1);
            for (int i = 0; i < v; ++i) p2 *= Rational(-2);
            sum += kap * p2;
          }
        Rational rhs =
            Rational::factorial(k) / (Rational::factorial(2 * a) * Rational::factorial(k - 2 * a));
        w.feed(sum - rhs, (sum - rhs).abs().to_double(), tup({a, k}));
      }
    }
  } else if (name == "jacobi") {
    rep.exact_route = true;
    for (int l = 0; l <= h - 1; ++l) {
      for (int k = h + l; k <= kmax; ++k) {
        Rational sum(0);
        for (int i = 0; i <= h - l; ++i) {
          Rational kt = Rational::binomial(h - l, i) * Rational::binomial(k - i - l + h, k - i - l - h);
          if ((i + h - l) % 2 == 1) kt = -kt;
          sum += kt;
        }
        Rational rhs;
        if (k >= 2 * h) {
          rhs = Rational::factorial(h - l) * Rational::factorial(k) /
                (Rational::factorial(k - h - l) * Rational::factorial(2 * h)) *
                Rational::binomial(2 * h, h - l);
        } else {
          rhs = Rational::binomial(k, k - h - l);
        }
        if ((h - l) % 2 == 1) rhs = -rhs;
        w.feed(sum - rhs, (sum - rhs).abs().to_double(), tup({l, k}));
      }
    }
  } else if (name == "rell") {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    for (int l = 0; l <= std::min(kmax, 10); ++l) {
      const Paravector x = random_paravector(alg, rng, 0.7);
      const Multivector lhs =
          Rational::binomial(l + 1 + 2 * h, l + 1).to_double() * eval_appell(alg, l + 1, x) -
          Rational::binomial(l + 2 * h, l).to_double() *
              mv_mul(x.to_multivector(), eval_appell(alg, l, x));
      const Multivector rhs =
          Rational::binomial(l + 2 * h, 2 * h - 1).to_double() * eval_harmonic(alg, l + 1, x);
      const double scale = std::max(1.0, rhs.norm());
      w.feed_float((lhs - rhs).norm() / scale, tup({l}));
    }
  } else if (name == "constant_pairs") {
    rep.exact_route = true;
    if (h < 2) {
      // sigma pairs still exist at h = 1; only the k pairs are empty
      for (int i = 0; i < h; ++i) {
        Rational d = sigma_nl_exact(n, h - i) * sigma_nl_exact(n, i + 1) + gamma_n_exact(n);
        w.feed(d, d.abs().to_double(), tup({i}));
      }
    } else {
      for (int i = 0; i + 2 <= h; ++i) {
        Rational d = k_alpha_exact(n, h - i - 1) * k_alpha_exact(n, i + 1) - gamma_n_exact(n);
        w.feed(d, d.abs().to_double(), tup({i}));
      }
      for (int i = 0; i < h; ++i) {
        Rational d = sigma_nl_exact(n, h - i) * sigma_nl_exact(n, i + 1) + gamma_n_exact(n);
        w.feed(d, d.abs().to_double(), tup({i}));
      }
    }
  } else {
    throw std::invalid_argument("identity_suite: unknown identity '" + name + "'");
  }

  rep.defect = w.fl;
  rep.exact_zero = rep.exact_route && w.exact.is_zero();
  rep.worst_tuple = w.tuple;
  return rep;
}

}  // namespace cliff::poly
