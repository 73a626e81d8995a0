#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cliffcalc/algebra.hpp"

using namespace cliff;

namespace {

// Independent blade-product oracle: multiply symbol lists by bubble sort,
// contracting repeated indices with e_i e_i = -1.  Shares nothing with the
// table-driven path under test.
std::pair<int, std::size_t> naive_blade_mul(std::size_t a, std::size_t b, int n) {
  std::vector<int> idx;
  for (int i = 0; i < n; ++i)
    if (a & (std::size_t{1} << i)) idx.push_back(i);
  for (int i = 0; i < n; ++i)
    if (b & (std::size_t{1} << i)) idx.push_back(i);
  int sign = 1;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
      if (idx[k] > idx[k + 1]) {
        std::swap(idx[k], idx[k + 1]);
        sign = -sign;
        moved = true;
      } else if (idx[k] == idx[k + 1]) {
        idx.erase(idx.begin() + k, idx.begin() + k + 2);
        sign = -sign;
        moved = true;
        break;
      }
    }
  }
  std::size_t mask = 0;
  for (int i : idx) mask |= std::size_t{1} << i;
  return {sign, mask};
}

Paravector rand_pv(const Algebra& alg, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(alg.n());
  for (double& t : v) t = g(rng);
  return Paravector(alg, g(rng), std::move(v));
}

}  // namespace

TEST_CASE("sign table matches the naive symbol-list product") {
  for (int n : {3, 5}) {
    const Algebra& alg = Algebra::get(n);
    for (std::size_t a = 0; a < alg.dim(); ++a)
      for (std::size_t b = 0; b < alg.dim(); ++b) {
        auto [sign, mask] = naive_blade_mul(a, b, n);
        CHECK(alg.sign(a, b) == doctest::Approx(sign));
        CHECK((a ^ b) == mask);
      }
  }
}

TEST_CASE("defining relations and hand-worked products") {
  const Algebra& alg = Algebra::get(3);
  const Multivector e1 = Multivector::basis_vector(alg, 1);
  const Multivector e2 = Multivector::basis_vector(alg, 2);
  const Multivector one = Multivector::scalar(alg, 1.0);

  CHECK((mv_mul(e1, e1) + one).norm() == doctest::Approx(0.0));
  CHECK((mv_mul(e1, e2) + mv_mul(e2, e1)).norm() == doctest::Approx(0.0));
  // (1+e1)(1-e1) = 2
  CHECK((mv_mul(one + e1, one - e1) - Multivector::scalar(alg, 2.0)).norm() ==
        doctest::Approx(0.0));
}

TEST_CASE("paravector conjugation and norms") {
  const Algebra& alg = Algebra::get(3);
  const Paravector x(alg, 2.0, {1.0, 1.0, 0.0});
  // x conj(x) = |x|^2 = 6
  CHECK((mv_mul(x.to_multivector(), x.conj().to_multivector()) -
         Multivector::scalar(alg, 6.0))
            .norm() == doctest::Approx(0.0));
  const Paravector r = Paravector::real(alg, 1.5);
  CHECK(r.conj().x0() == 1.5);
  CHECK(r.conj().vec_norm() == 0.0);

  std::mt19937_64 rng(7);
  for (int n : {3, 5, 7}) {
    const Algebra& a = Algebra::get(n);
    for (int t = 0; t < 200; ++t) {
      const Paravector y = rand_pv(a, rng);
      const Multivector ym = y.to_multivector(), yb = y.conj().to_multivector();
      const double scale = std::max(1.0, y.abs2());
      CHECK((mv_mul(ym, yb) - Multivector::scalar(a, y.abs2())).norm() / scale < 1e-14);
      CHECK((mv_mul(yb, ym) - Multivector::scalar(a, y.abs2())).norm() / scale < 1e-14);
      CHECK((ym + yb - Multivector::scalar(a, 2 * y.x0())).norm() / scale < 1e-14);
    }
  }
}

TEST_CASE("paravector powers stay paravectors and satisfy the recursion") {
  const Algebra& alg = Algebra::get(3);
  // x^0 = 1, e1^2 = -1, (1+e1)^2 = 2 e1
  const Paravector e1(alg, 0.0, {1.0, 0.0, 0.0});
  CHECK(e1.pow(0).x0() == doctest::Approx(1.0));
  CHECK(e1.pow(2).x0() == doctest::Approx(-1.0));
  CHECK(e1.pow(2).vec_norm() == doctest::Approx(0.0));
  const Paravector z(alg, 1.0, {1.0, 0.0, 0.0});
  const Paravector z2 = z.pow(2);
  CHECK(z2.x0() == doctest::Approx(0.0));
  CHECK(z2.vec()[0] == doctest::Approx(2.0));

  std::mt19937_64 rng(13);
  for (int n : {3, 5, 7}) {
    const Algebra& a = Algebra::get(n);
    for (int t = 0; t < 20; ++t) {
      const Paravector x = rand_pv(a, rng);
      Multivector p = Multivector::scalar(a, 1.0);
      for (int m = 0; m <= 20; ++m) {
        CHECK((x.pow(m).to_multivector() - p).norm() / std::max(1.0, p.norm()) < 1e-12);
        p = mv_mul(p, x.to_multivector());
      }
    }
  }
}

TEST_CASE("associativity on random triples") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  for (int n : {3, 5, 7}) {
    const Algebra& alg = Algebra::get(n);
    for (int t = 0; t < 100; ++t) {
      Multivector a(alg), b(alg), c(alg);
      for (std::size_t k = 0; k < alg.dim(); ++k) {
        a[k] = g(rng);
        b[k] = g(rng);
        c[k] = g(rng);
      }
      const double scale = a.norm() * b.norm() * c.norm();
      CHECK((mv_mul(mv_mul(a, b), c) - mv_mul(a, mv_mul(b, c))).norm() / scale < 1e-12);
    }
  }
}

TEST_CASE("same_sphere predicate") {
  const Algebra& alg = Algebra::get(3);
  const Paravector a(alg, 1.0, {1.0, 0.0, 0.0});
  const Paravector b(alg, 1.0, {0.0, 1.0, 0.0});
  const Paravector c(alg, 2.0, {1.0, 0.0, 0.0});
  CHECK(same_sphere(a, b));
  CHECK(!same_sphere(a, c));
  // sphere of radius zero around a real point
  const Paravector r = Paravector::real(alg, 0.7);
  CHECK(same_sphere(r, r));
}

TEST_CASE("slice points decompose and realize consistently") {
  const Algebra& alg = Algebra::get(5);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const Paravector x = rand_pv(alg, rng);
    const SlicePoint sp = SlicePoint::decompose(x);
    const Paravector back = sp.realize();
    CHECK(std::abs(back.x0() - x.x0()) < 1e-14);
    CHECK(std::abs(back.vec_norm() - x.vec_norm()) < 1e-12);
    for (int i = 0; i < alg.n(); ++i)
      CHECK(std::abs(back.vec()[i] - x.vec()[i]) < 1e-12);
  }
}

TEST_CASE("canonical order: grade-major, lexicographic within grade") {
  const Algebra& alg = Algebra::get(3);
  // expect 1, e1, e2, e3, e12, e13, e23, e123
  const std::vector<std::size_t> expect{0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111};
  for (std::size_t p = 0; p < alg.dim(); ++p) CHECK(alg.canonical_to_mask(p) == expect[p]);

  Multivector m(alg);
  for (std::size_t k = 0; k < alg.dim(); ++k) m[k] = static_cast<double>(k);
  const auto canon = m.to_canonical();
  for (std::size_t p = 0; p < alg.dim(); ++p) CHECK(canon[p] == static_cast<double>(expect[p]));
  const Multivector back = Multivector::from_canonical(alg, canon);
  CHECK((back - m).norm() == 0.0);
}

TEST_CASE("algebra mismatch is rejected") {
  const Algebra& a3 = Algebra::get(3);
  const Algebra& a5 = Algebra::get(5);
  const Multivector x = Multivector::scalar(a3, 1.0);
  const Multivector y = Multivector::scalar(a5, 1.0);
  CHECK_THROWS_AS((void)mv_mul(x, y), AlgebraMismatchError);
}

TEST_CASE("slice embedding and projection round-trip") {
  const Algebra& alg = Algebra::get(5);
  std::vector<double> unit{0.6, 0.0, 0.8, 0.0, 0.0};
  const std::complex<double> z{1.25, -0.5};
  const Multivector m = embed_slice(alg, z, unit);
  double resid = 1;
  const std::complex<double> back = project_slice(m, unit, &resid);
  CHECK(std::abs(back - z) < 1e-15);
  CHECK(resid < 1e-15);
}
