#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cliffcalc/operator_calculus.hpp"
#include "cliffcalc/polynomials.hpp"

using namespace cliff;

namespace {

ContourSpec circle(const Algebra& alg, double radius = 2.0, int nodes = 256) {
  ContourSpec c;
  c.radius = radius;
  c.nodes = nodes;
  c.slice_unit.assign(alg.n(), 0.0);
  c.slice_unit[0] = 1.0;
  return c;
}

CommutingParavectorOp sym_op(const Algebra& alg, std::mt19937_64& rng, int d, double scale,
                             bool zero_t0 = false, bool zero_tn = false) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = g(rng);
  const Eigen::MatrixXd V = Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ();
  std::vector<Eigen::MatrixXd> comps;
  for (int mu = 0; mu <= alg.n(); ++mu) {
    Eigen::VectorXd diag(d);
    for (int i = 0; i < d; ++i) diag[i] = scale * g(rng) / (alg.n() + 1.0);
    if ((zero_t0 && mu == 0) || (zero_tn && mu == alg.n())) diag.setZero();
    comps.push_back(V * diag.asDiagonal() * V.transpose());
  }
  return CommutingParavectorOp(alg, std::move(comps));
}

}  // namespace

TEST_CASE("s_spectrum: scalar case, vector diagonal, real points") {
  const Algebra& a3 = Algebra::get(3);
  // d = 1, T = paravector x: one sphere (x0, |vec x|)
  const Paravector x(a3, 0.3, {0.4, 0.0, 0.3});
  auto spec = s_spectrum(CommutingParavectorOp::from_paravector(x));
  REQUIRE(spec.size() == 1);
  CHECK(spec[0].t0 == doctest::Approx(0.3));
  CHECK(spec[0].rho == doctest::Approx(0.5));

  // T1 = diag(1,2), rest 0: spheres (0,1), (0,2)
  std::vector<Eigen::MatrixXd> comps(4, Eigen::MatrixXd::Zero(2, 2));
  comps[1].diagonal() << 1.0, 2.0;
  auto spec2 = s_spectrum(CommutingParavectorOp(a3, comps));
  REQUIRE(spec2.size() == 2);
  std::sort(spec2.begin(), spec2.end(), [](auto a, auto b) { return a.rho < b.rho; });
  CHECK(spec2[0].rho == doctest::Approx(1.0));
  CHECK(spec2[1].rho == doctest::Approx(2.0));
  CHECK(spec2[0].t0 == doctest::Approx(0.0));

  // T0 = diag(1,1): the real point 1 (radius 0)
  std::vector<Eigen::MatrixXd> comps3(4, Eigen::MatrixXd::Zero(2, 2));
  comps3[0] = Eigen::MatrixXd::Identity(2, 2);
  auto spec3 = s_spectrum(CommutingParavectorOp(a3, comps3));
  REQUIRE(spec3.size() == 1);
  CHECK(spec3[0].t0 == doctest::Approx(1.0));
  CHECK(spec3[0].rho == doctest::Approx(0.0));
}

TEST_CASE("resolvents reduce to pointwise kernels at d = 1") {
  std::mt19937_64 rng(3);
  const Algebra& a5 = Algebra::get(5);
  const Paravector x(a5, 0.2, {0.3, 0.0, 0.0, -0.2, 0.1});
  const Paravector s(a5, 1.9, {0.4, 0.0, 0.0, 0.0, 0.3});
  const CommutingParavectorOp T = CommutingParavectorOp::from_paravector(x);
  const Multivector sl = resolvent(ResolventKind::SL, 0, s, T).at(0, 0);
  const Multivector want =
      eval_kernel({KernelFamily::CauchyL, Side::left, KernelForm::II, 0}, s, x);
  CHECK((sl - want).norm() < 1e-13);
  // S_L at T = 0 is s^{-1} I
  const CommutingParavectorOp zero =
      CommutingParavectorOp::from_paravector(Paravector::zero(a5));
  const Multivector at0 = resolvent(ResolventKind::SL, 0, Paravector::real(a5, 2.0), zero).at(0, 0);
  CHECK((at0 - Multivector::scalar(a5, 0.5)).norm() < 1e-15);
}

TEST_CASE("F resolvent at T=0, s=2 (n=3) is -I/2") {
  const Algebra& a3 = Algebra::get(3);
  std::vector<Eigen::MatrixXd> comps(4, Eigen::MatrixXd::Zero(2, 2));
  const CommutingParavectorOp T(a3, comps);
  const CliffordMatrix f = resolvent(ResolventKind::FL, 0, Paravector::real(a3, 2.0), T);
  CliffordMatrix want = CliffordMatrix::identity(a3, 2);
  want *= -0.5;
  CHECK((f - want).norm() < 1e-14);
}

TEST_CASE("hypothesis diagnostics name the violated assumption") {
  const Algebra& a3 = Algebra::get(3);
  std::mt19937_64 rng(5);
  // noncommuting components
  std::vector<Eigen::MatrixXd> comps(4, Eigen::MatrixXd::Zero(2, 2));
  comps[1] << 0, 1, 0, 0;
  comps[2] << 0, 0, 1, 0;
  const CommutingParavectorOp bad(a3, comps);
  try {
    (void)contour_calculus(Calculus::S, 0, SlicePolynomial::monomial(a3, Side::left, 1), bad,
                           circle(a3));
    CHECK(false);
  } catch (const HypothesisError& e) {
    CHECK(std::string(e.what()).find("commute") != std::string::npos);
  }

  // polyanalytic requires T_n = 0
  std::vector<Eigen::MatrixXd> comps2(4, Eigen::MatrixXd::Zero(2, 2));
  comps2[3] = Eigen::MatrixXd::Identity(2, 2) * 0.5;
  const CommutingParavectorOp tn(a3, comps2);
  try {
    (void)contour_calculus(Calculus::Polyanalytic, 0,
                           SlicePolynomial::monomial(a3, Side::left, 1), tn, circle(a3));
    CHECK(false);
  } catch (const HypothesisError& e) {
    CHECK(std::string(e.what()).find("T_3") != std::string::npos);
  }

  // enclosure failure
  const CommutingParavectorOp big = sym_op(a3, rng, 2, 8.0);
  CHECK_THROWS_AS((void)contour_calculus(Calculus::S, 0,
                                         SlicePolynomial::monomial(a3, Side::left, 1), big,
                                         circle(a3, 1.0)),
                  EnclosureError);

  // spectral proximity for a pointwise resolvent
  const Paravector x(a3, 0.5, {0.5, 0.0, 0.0});
  const CommutingParavectorOp T = CommutingParavectorOp::from_paravector(x);
  const Paravector on(a3, 0.5, {0.0, 0.5, 0.0});
  CHECK_THROWS_AS((void)resolvent(ResolventKind::SL, 0, on, T), SpectralProximityError);
}

TEST_CASE("S-calculus on monomials: desk cases") {
  const Algebra& a3 = Algebra::get(3);
  // d = 1, x = 1 + e1, f(s) = s^2 -> (1+e1)^2 = 2 e1
  const Paravector x(a3, 1.0, {1.0, 0.0, 0.0});
  const CommutingParavectorOp T = CommutingParavectorOp::from_paravector(x);
  const CliffordMatrix got = contour_calculus(
      Calculus::S, 0, SlicePolynomial::monomial(a3, Side::left, 2), T, circle(a3, 2.5));
  CHECK((got.at(0, 0) - Multivector::basis_vector(a3, 1) * 2.0).norm() < 1e-12);

  // T1 = diag(1,2), m=2 -> T^2 = -diag(1,4)
  std::vector<Eigen::MatrixXd> comps(4, Eigen::MatrixXd::Zero(2, 2));
  comps[1].diagonal() << 1.0, 2.0;
  const CommutingParavectorOp T2(a3, comps);
  const CliffordMatrix got2 = contour_calculus(
      Calculus::S, 0, SlicePolynomial::monomial(a3, Side::left, 2), T2, circle(a3, 3.0));
  CHECK(got2.at(0, 0)[0] == doctest::Approx(-1.0));
  CHECK(got2.at(1, 1)[0] == doctest::Approx(-4.0));
  CHECK(std::abs(got2.at(0, 1).norm()) < 1e-12);
}

TEST_CASE("F-calculus of s^2 at T=0 is -4I; polyharmonic of s is -2I") {
  const Algebra& a3 = Algebra::get(3);
  std::vector<Eigen::MatrixXd> comps(4, Eigen::MatrixXd::Zero(2, 2));
  const CommutingParavectorOp T0(a3, comps);
  const CliffordMatrix f = contour_calculus(
      Calculus::F, 0, SlicePolynomial::monomial(a3, Side::left, 2), T0, circle(a3));
  CliffordMatrix want = CliffordMatrix::identity(a3, 2);
  want *= -4.0;
  CHECK((f - want).norm() < 1e-12);

  std::mt19937_64 rng(7);
  const CommutingParavectorOp T = sym_op(a3, rng, 2, 1.0);
  const CliffordMatrix h = contour_calculus(
      Calculus::Polyharmonic, 1, SlicePolynomial::monomial(a3, Side::left, 1), T, circle(a3));
  CliffordMatrix want2 = CliffordMatrix::identity(a3, 2);
  want2 *= -2.0;
  CHECK((h - want2).norm() < 1e-11);
}

TEST_CASE("appell moments: frozen examples") {
  const Algebra& a3 = Algebra::get(3);
  std::vector<Eigen::MatrixXd> comps(4, Eigen::MatrixXd::Zero(2, 2));
  const CommutingParavectorOp T0(a3, comps);
  const CliffordMatrix m0 = appell_moment(T0, 0, circle(a3));
  CHECK((m0 - CliffordMatrix::identity(a3, 2)).norm() < 1e-13);

  // m = 1, T1 = diag(1,2): (2T + Tbar)/3 = e1 diag(1,2)/3
  std::vector<Eigen::MatrixXd> comps2(4, Eigen::MatrixXd::Zero(2, 2));
  comps2[1].diagonal() << 1.0, 2.0;
  const CommutingParavectorOp T(a3, comps2);
  const CliffordMatrix m1 = appell_moment(T, 1, circle(a3, 3.0));
  CHECK(m1.at(0, 0)[1] == doctest::Approx(1.0 / 3.0));
  CHECK(m1.at(1, 1)[1] == doctest::Approx(2.0 / 3.0));
  CHECK((m1 - appell_operator(T, 1)).norm() < 1e-12);

  std::mt19937_64 rng(11);
  const Algebra& a5 = Algebra::get(5);
  const CommutingParavectorOp T5 = sym_op(a5, rng, 3, 1.0);
  CHECK((appell_moment(T5, 2, circle(a5)) - appell_operator(T5, 2)).norm() < 1e-8);
}

TEST_CASE("moment vanishing: frozen exponent examples at n=3") {
  const Algebra& a3 = Algebra::get(3);
  std::mt19937_64 rng(13);
  const CommutingParavectorOp T = sym_op(a3, rng, 2, 1.0, false, true);
  CHECK(moment_vanishing(Calculus::F, 0, T, circle(a3), 1) < 1e-10);
  CHECK(moment_vanishing(Calculus::Polyharmonic, 1, T, circle(a3), 0) < 1e-10);
  CHECK(moment_vanishing(Calculus::Polyanalytic, 0, T, circle(a3), 0) < 1e-10);
  // outside the stated range the moment is generically nonzero
  CHECK(moment_vanishing(Calculus::F, 0, T, circle(a3), 2) > 1e-4);
  CHECK(moment_vanishing_bound(Calculus::F, 0, 3) == 1);
}

TEST_CASE("resolvent equations at d=1 are near machine precision") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int n : {3, 5}) {
    const Algebra& alg = Algebra::get(n);
    std::vector<double> xv(alg.n());
    for (double& t : xv) t = 0.2 * g(rng);
    const CommutingParavectorOp T =
        CommutingParavectorOp::from_paravector(Paravector(alg, 0.1, xv));
    std::vector<double> sv(alg.n(), 0.0), pv(alg.n(), 0.0);
    sv[0] = 0.7;
    pv[alg.n() - 1] = 0.9;
    const Paravector s(alg, 2.0, sv);
    const Paravector p(alg, 1.6, pv);
    CHECK(resolvent_equation_check(ResolventEquation::LeftS, s, p, T) < 1e-12);
    CHECK(resolvent_equation_check(ResolventEquation::RightS, s, p, T) < 1e-12);
    CHECK(resolvent_equation_check(ResolventEquation::TwoSidedS, s, p, T) < 1e-12);
    CHECK(resolvent_equation_check(ResolventEquation::FEq, s, p, T) < 1e-11);
  }
}

TEST_CASE("product rule desk case: f = g = s at T = 0 gives -4I both ways") {
  const Algebra& a3 = Algebra::get(3);
  std::vector<Eigen::MatrixXd> comps(4, Eigen::MatrixXd::Zero(2, 2));
  const CommutingParavectorOp T(a3, comps);
  const SlicePolynomial s1 = SlicePolynomial::monomial(a3, Side::left, 1);
  CHECK(product_rule_check(s1, s1, T, circle(a3)) < 1e-9);
  // side checks
  CHECK_THROWS_AS(
      (void)product_rule_check(SlicePolynomial(Side::left, {Multivector::basis_vector(a3, 1)}),
                               s1, T, circle(a3)),
      SideMismatchError);
}

TEST_CASE("kernel independence rejects junk beyond the bound") {
  const Algebra& a3 = Algebra::get(3);
  std::mt19937_64 rng(19);
  const CommutingParavectorOp T = sym_op(a3, rng, 2, 1.0);
  const SlicePolynomial f = SlicePolynomial::monomial(a3, Side::left, 4);
  const SlicePolynomial junk = SlicePolynomial::monomial(a3, Side::left, 2);  // degree 2 > n-2
  CHECK_THROWS_AS((void)kernel_independence_check(Calculus::F, 0, f, junk, T, circle(a3)),
                  ParameterRangeError);
  const SlicePolynomial ok = SlicePolynomial::monomial(a3, Side::left, 1);
  CHECK(kernel_independence_check(Calculus::F, 0, f, ok, T, circle(a3)) < 1e-10);
}

TEST_CASE("monogenic resolvent: frozen example and axial symmetry") {
  const Algebra& a3 = Algebra::get(3);
  std::vector<Eigen::MatrixXd> comps(4, Eigen::MatrixXd::Zero(1, 1));
  const CommutingParavectorOp T0(a3, comps);
  // G(e1, 0) = (1/Sigma_4)(-e1)
  const Paravector e1(a3, 0.0, {1.0, 0.0, 0.0});
  const Multivector g = monogenic_resolvent(e1, T0).at(0, 0);
  CHECK((g + Multivector::basis_vector(a3, 1) *
                 (1.0 / (2.0 * std::numbers::pi * std::numbers::pi)))
            .norm() < 1e-15);

  // slice-rotated y gives the rotated value (axial symmetry at T=0)
  const Paravector y1(a3, 0.5, {0.8, 0.0, 0.0});
  const Paravector y2(a3, 0.5, {0.0, 0.8, 0.0});
  const Multivector g1 = monogenic_resolvent(y1, T0).at(0, 0);
  const Multivector g2 = monogenic_resolvent(y2, T0).at(0, 0);
  CHECK(g1[0] == doctest::Approx(g2[0]));
  CHECK(g1[1] == doctest::Approx(g2[2]));

  // vector-form hypothesis: T0 must vanish
  std::vector<Eigen::MatrixXd> comps2(4, Eigen::MatrixXd::Identity(1, 1));
  const CommutingParavectorOp bad(a3, comps2);
  CHECK_THROWS_AS((void)monogenic_resolvent(e1, bad), HypothesisError);
}

TEST_CASE("monogenic surface calculus: P_0 -> I with a coarse grid") {
  const Algebra& a3 = Algebra::get(3);
  std::mt19937_64 rng(23);
  const CommutingParavectorOp T = sym_op(a3, rng, 2, 0.8, /*zero_t0=*/true);
  SphereGrid grid;
  grid.n_chi = 16;
  grid.n_theta = 16;
  grid.n_phi = 32;
  const CliffordMatrix got = monogenic_surface_calc(
      [&](const Paravector& p) { return poly::eval_appell(a3, 0, p); }, T, 2.0, grid);
  CHECK((got - CliffordMatrix::identity(a3, 2)).norm() < 1e-6);
  // n = 3 only
  const Algebra& a5 = Algebra::get(5);
  std::vector<Eigen::MatrixXd> c5(6, Eigen::MatrixXd::Zero(1, 1));
  CHECK_THROWS_AS((void)monogenic_surface_calc(
                      [&](const Paravector& p) { return poly::eval_appell(a5, 0, p); },
                      CommutingParavectorOp(a5, c5), 2.0, grid),
                  HypothesisError);
}

TEST_CASE("pointwise diagonal oracle requires diagonal input") {
  const Algebra& a3 = Algebra::get(3);
  std::mt19937_64 rng(29);
  const CommutingParavectorOp T = sym_op(a3, rng, 2, 1.0);  // dense symmetric
  CHECK_THROWS_AS((void)pointwise_oracle_check(Calculus::S, 0,
                                               SlicePolynomial::monomial(a3, Side::left, 2), T,
                                               circle(a3)),
                  HypothesisError);
}

TEST_CASE("slice polynomial evaluation, intrinsic flag and jets") {
  const Algebra& a3 = Algebra::get(3);
  const SlicePolynomial f = SlicePolynomial::monomial(a3, Side::left, 3);
  CHECK(f.intrinsic());
  Multivector a(a3);
  a[1] = 1.0;
  const SlicePolynomial g(Side::left, {a, Multivector::scalar(a3, 1.0)});
  CHECK(!g.intrinsic());
  const Paravector x(a3, 0.4, {0.3, 0.0, -0.2});
  CHECK((f.eval(x) - x.pow(3).to_multivector()).norm() < 1e-14);
  // jets of the polynomial agree with direct evaluation at the center
  const Jet j = g.to_jet(x, 2);
  CHECK((j.value() - g.eval(x)).norm() < 1e-14);
}
