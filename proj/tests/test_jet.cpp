#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cliffcalc/jet.hpp"
#include "cliffcalc/kernels.hpp"
#include "cliffcalc/polynomials.hpp"

using namespace cliff;

namespace {

Paravector rand_pv(const Algebra& alg, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g;
  std::vector<double> v(alg.n());
  for (double& t : v) t = g(rng) * scale;
  return Paravector(alg, g(rng) * scale, std::move(v));
}

// central finite differences of a pointwise function; the independent
// route against which the jet derivatives are cross-checked
template <typename F>
Multivector fd_dirac(const Algebra& alg, F f, const Paravector& x, bool conjugate, double step) {
  std::vector<double> pt(alg.n() + 1);
  pt[0] = x.x0();
  for (int i = 0; i < alg.n(); ++i) pt[i + 1] = x.vec()[i];
  auto at = [&](const std::vector<double>& p) {
    return f(Paravector(alg, p[0], std::vector<double>(p.begin() + 1, p.end())));
  };
  auto up = pt, dn = pt;
  up[0] += step;
  dn[0] -= step;
  Multivector acc = (at(up) - at(dn)) * (0.5 / step);
  for (int i = 1; i <= alg.n(); ++i) {
    up = pt;
    dn = pt;
    up[i] += step;
    dn[i] -= step;
    const Multivector der = (at(up) - at(dn)) * (0.5 / step);
    acc += mv_mul(Multivector::basis_vector(alg, i), der) * (conjugate ? -1.0 : 1.0);
  }
  return acc;
}

}  // namespace

TEST_CASE("multi-index table ranks and shifts consistently") {
  auto tab = MultiIndexTable::get(4, 5);
  for (std::size_t i = 0; i < tab->count(); ++i) {
    CHECK(tab->index_of(tab->exponents(i)) == i);
    const std::size_t up = tab->shifted(i, 2, +1);
    if (up != MultiIndexTable::npos) {
      CHECK(tab->degree(up) == tab->degree(i) + 1);
      CHECK(tab->shifted(up, 2, -1) == i);
    }
  }
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, tab->count() - 1);
  for (int t = 0; t < 200; ++t) {
    const std::size_t a = pick(rng), b = pick(rng);
    const std::size_t s = tab->sum_index(a, b);
    if (tab->degree(a) + tab->degree(b) > tab->order()) {
      CHECK(s == MultiIndexTable::npos);
    } else {
      auto ea = tab->exponents(a);
      auto eb = tab->exponents(b);
      auto es = tab->exponents(s);
      for (int v = 0; v < tab->nvars(); ++v) CHECK(es[v] == ea[v] + eb[v]);
    }
  }
}

TEST_CASE("jet of the identity map and its Dirac images") {
  const Algebra& alg = Algebra::get(3);
  const Paravector zero = Paravector::zero(alg);
  const Jet x = jet_variable(alg, zero, 2);

  // D x = 1 - n  (= -2 at n = 3), Dbar x = 1 + n
  const Jet dx = apply_dirac(x, false);
  CHECK((dx.value() - Multivector::scalar(alg, 1.0 - 3.0)).norm() == doctest::Approx(0.0));
  const Jet dbx = apply_dirac(x, true);
  CHECK((dbx.value() - Multivector::scalar(alg, 1.0 + 3.0)).norm() == doctest::Approx(0.0));

  // D P_1^3 = D (2x + xbar)/3 = 0
  Jet p1 = jet_variable(alg, zero, 2) * (2.0 / 3.0);
  p1 += jet_conj_variable(alg, zero, 2) * (1.0 / 3.0);
  CHECK(apply_dirac(p1, false).norm() < 1e-15);
}

TEST_CASE("jet of x^2 around 0 reproduces the paravector square") {
  const Algebra& alg = Algebra::get(3);
  const Jet j = jet_pv_power(alg, Paravector::zero(alg), 2, 2);
  // x^2 = x0^2 - sum x_i^2 + 2 x0 x_i e_i
  const auto& tab = j.table();
  std::vector<std::uint8_t> a(4, 0);
  a[0] = 2;
  CHECK(j.coeff(tab.index_of(a))[0] == doctest::Approx(1.0));
  for (int i = 1; i <= 3; ++i) {
    std::fill(a.begin(), a.end(), 0);
    a[i] = 2;
    CHECK(j.coeff(tab.index_of(a))[0] == doctest::Approx(-1.0));
    std::fill(a.begin(), a.end(), 0);
    a[0] = 1;
    a[i] = 1;
    CHECK(j.coeff(tab.index_of(a))[std::size_t{1} << (i - 1)] == doctest::Approx(2.0));
  }
}

TEST_CASE("conjugate variable at a real center") {
  const Algebra& alg = Algebra::get(3);
  const Jet j = jet_conj_variable(alg, Paravector::real(alg, 1.5), 1);
  CHECK((j.value() - Multivector::scalar(alg, 1.5)).norm() == doctest::Approx(0.0));
  std::vector<std::uint8_t> a(4, 0);
  a[1] = 1;
  CHECK(j.coeff(j.table().index_of(a))[1] == doctest::Approx(-1.0));
}

TEST_CASE("laplacian examples: Delta x^2 = -4 at n=3; Delta^2 x^3 = 0 at n=5") {
  {
    const Algebra& alg = Algebra::get(3);
    const Jet j = jet_pv_power(alg, Paravector::zero(alg), 2, 2);
    const Jet d = apply_laplacian_power(j, 1);
    CHECK((d.value() - Multivector::scalar(alg, -4.0)).norm() == doctest::Approx(0.0));
  }
  {
    const Algebra& alg = Algebra::get(5);
    const Jet j = jet_pv_power(alg, Paravector::zero(alg), 4, 3);
    CHECK(apply_laplacian_power(j, 2).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("slice-jet reciprocal: geometric series and Q self-consistency") {
  const Algebra& alg = Algebra::get(3);
  // q = 1 + x0 in the slice of e1, order 3: recip = 1 - x0 + x0^2 - x0^3
  SliceJet q(alg, Paravector::zero(alg), 3, {1.0, 0.0, 0.0});
  q.coeff(0) = 1.0;
  std::vector<std::uint8_t> a(4, 0);
  a[0] = 1;
  q.coeff(q.table().index_of(a)) = 1.0;
  const SliceJet r = q.recip();
  for (int k = 0; k <= 3; ++k) {
    std::fill(a.begin(), a.end(), 0);
    a[0] = static_cast<std::uint8_t>(k);
    CHECK(r.coeff(r.table().index_of(a)).real() == doctest::Approx(k % 2 == 0 ? 1.0 : -1.0));
  }

  // constant jet 2 -> 1/2
  SliceJet two(alg, Paravector::zero(alg), 2, {1.0, 0.0, 0.0});
  two.coeff(0) = 2.0;
  CHECK(two.recip().coeff(0).real() == doctest::Approx(0.5));

  // Q_{c,s}(x) at center 0, s = 2: constant 4; q * recip(q) = 1
  const Paravector s = Paravector::real(alg, 2.0);
  const SliceJet qj = jet_qcs(alg, s, Paravector::zero(alg), 6);
  CHECK(qj.coeff(0).real() == doctest::Approx(4.0));
  const SliceJet prod = slice_mul(qj, qj.recip());
  double defect = 0;
  for (std::size_t i = 0; i < prod.table().count(); ++i)
    defect = std::max(defect, std::abs(prod.coeff(i) - std::complex<double>(i == 0 ? 1.0 : 0.0)));
  CHECK(defect < 1e-13);
}

TEST_CASE("jet_recip checks the slice and flags singular centers") {
  const Algebra& alg = Algebra::get(3);
  // center on the sphere [s]: Q(center) = 0 -> singular-jet error
  const Paravector s(alg, 1.0, {0.5, 0.0, 0.0});
  const Paravector on_sphere(alg, 1.0, {0.0, 0.5, 0.0});
  CHECK_THROWS_AS((void)jet_qcs(alg, s, on_sphere, 4).recip(), SingularJetError);

  // jets with coefficients outside one slice are refused
  Jet bad(alg, Paravector::zero(alg), 2);
  Multivector c0(alg);
  c0[0] = 2.0;
  c0[1] = 0.5;  // e1 direction
  bad.set_coeff(0, c0);
  Multivector c1(alg);
  c1[2] = 0.7;  // e2 direction in a higher coefficient
  bad.set_coeff(4, c1);
  CHECK_THROWS_AS((void)jet_recip(bad), SingularJetError);

  // a genuine slice jet inverts fine: q rebuilt from Q
  const Paravector s2(alg, 2.0, {0.3, 0.0, 0.4});
  const Jet q = jet_qcs(alg, s2, Paravector::zero(alg), 5).promote();
  const Jet r = jet_recip(q);
  const Jet prod = jet_mul(q, r);
  Jet want = jet_constant(alg, Paravector::zero(alg), 5, Multivector::scalar(alg, 1.0));
  Jet diff = prod;
  diff -= want;
  CHECK(diff.max_coeff_norm() < 1e-12);
}

TEST_CASE("D Dbar = Delta and laplacian powers compose") {
  std::mt19937_64 rng(11);
  for (int n : {3, 5}) {
    const Algebra& alg = Algebra::get(n);
    const Paravector c = rand_pv(alg, rng, 0.4);
    const Paravector s = Paravector(alg, 2.0, std::vector<double>(alg.n(), 0.1));
    const Jet k = jet_of_kernel({KernelFamily::CauchyL, Side::left, KernelForm::II, 0}, s, c, 6);

    Jet ddbar = apply_dirac(apply_dirac(k, true), false);
    Jet lap = apply_laplacian_power(k, 1).truncated(ddbar.order());
    Jet diff = ddbar;
    diff -= lap;
    CHECK(diff.max_coeff_norm() / std::max(1.0, lap.max_coeff_norm()) < 1e-12);

    Jet two_step = apply_laplacian_power(apply_laplacian_power(k, 1), 1);
    Jet one_shot = apply_laplacian_power(k, 2);
    Jet diff2 = two_step;
    diff2 -= one_shot;
    CHECK(diff2.max_coeff_norm() / std::max(1.0, one_shot.max_coeff_norm()) < 1e-12);
  }
}

TEST_CASE("jet derivatives cross-checked by finite differences") {
  const Algebra& alg = Algebra::get(3);
  const Paravector s(alg, 2.0, {0.3, 0.0, 0.4});
  const Paravector x(alg, 0.2, {0.25, 0.0, -0.1});
  const KernelId id{KernelFamily::CauchyL, Side::left, KernelForm::II, 0};

  const Jet k = jet_of_kernel(id, s, x, 3);
  auto f = [&](const Paravector& p) { return eval_kernel(id, s, p); };
  for (bool conj : {false, true}) {
    const Multivector jet_val = apply_dirac(k, conj).value();
    const Multivector fd_val = fd_dirac(alg, f, x, conj, 1e-5);
    CHECK((jet_val - fd_val).norm() / std::max(1.0, fd_val.norm()) < 1e-8);
  }
}

TEST_CASE("jet_of_kernel order-0 coefficients equal the closed kernels") {
  std::mt19937_64 rng(31);
  for (int n : {3, 5}) {
    const Algebra& alg = Algebra::get(n);
    const int h = (n - 1) / 2;
    const Paravector s(alg, 2.0, std::vector<double>(alg.n(), 0.2));
    const Paravector x = rand_pv(alg, rng, 0.3);
    std::vector<KernelId> ids = {{KernelFamily::CauchyL, Side::left, KernelForm::II, 0},
                                 {KernelFamily::CauchyR, Side::right, KernelForm::II, 0},
                                 {KernelFamily::Fn, Side::left, KernelForm::II, 0},
                                 {KernelFamily::H, Side::left, KernelForm::II, 1},
                                 {KernelFamily::P, Side::left, KernelForm::II, 0}};
    if (h >= 2) ids.push_back({KernelFamily::K, Side::left, KernelForm::II, 1});
    for (const auto& id : ids) {
      const Multivector want = eval_kernel(id, s, x);
      const Multivector got = jet_of_kernel(id, s, x, 2).value();
      CHECK((got - want).norm() / std::max(1.0, want.norm()) < 1e-13);
    }
  }
}

TEST_CASE("S_L form II kernel jet: desk values at s=2, center 0") {
  const Algebra& alg = Algebra::get(3);
  const Paravector s = Paravector::real(alg, 2.0);
  const Jet j = jet_of_kernel({KernelFamily::CauchyL, Side::left, KernelForm::II, 0}, s,
                              Paravector::zero(alg), 3);
  // constant term (s - cbar) Q(c)^{-1} = 2/4 = 1/2, the head of the
  // geometric series sum_m 0^m 2^{-1-m}
  CHECK((j.value() - Multivector::scalar(alg, 0.5)).norm() < 1e-15);
}

TEST_CASE("insufficient order is reported") {
  const Algebra& alg = Algebra::get(3);
  const Jet j0 = jet_constant(alg, Paravector::zero(alg), 0, Multivector::scalar(alg, 1.0));
  CHECK_THROWS_AS((void)apply_dirac(j0, false), InsufficientOrderError);
  const Jet j2 = jet_pv_power(alg, Paravector::zero(alg), 2, 2);
  CHECK_THROWS_AS((void)apply_laplacian_power(j2, 2), InsufficientOrderError);
}

TEST_CASE("jet evaluation away from the center") {
  const Algebra& alg = Algebra::get(3);
  std::mt19937_64 rng(7);
  const Paravector c = rand_pv(alg, rng, 0.5);
  const Paravector x = rand_pv(alg, rng, 0.5);
  for (unsigned m : {1u, 3u, 5u}) {
    const Jet j = jet_pv_power(alg, c, static_cast<int>(m), m);
    CHECK((j.eval(x) - x.pow(m).to_multivector()).norm() < 1e-12);
  }
}

TEST_CASE("reciprocal property on random slice jets") {
  std::mt19937_64 rng(51);
  std::normal_distribution<double> g;
  for (int n : {3, 5}) {
    const Algebra& alg = Algebra::get(n);
    std::vector<double> unit(alg.n(), 0.0);
    unit[0] = 0.8;
    unit[alg.n() - 1] = 0.6;
    for (int t = 0; t < 10; ++t) {
      SliceJet q(alg, Paravector::zero(alg), 4, unit);
      for (std::size_t i = 0; i < q.table().count(); ++i)
        q.coeff(i) = {g(rng), g(rng)};
      q.coeff(0) += 3.0;  // constant term bounded away from zero
      const SliceJet prod = slice_mul(q, q.recip());
      double defect = 0;
      for (std::size_t i = 0; i < prod.table().count(); ++i)
        defect = std::max(defect,
                          std::abs(prod.coeff(i) - std::complex<double>(i == 0 ? 1.0 : 0.0)));
      CHECK(defect < 1e-12);
    }
  }
}
