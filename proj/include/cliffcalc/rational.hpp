#pragma once

#include <stdexcept>
#include <string>

namespace cliff {

struct RationalOverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

/// Exact fraction on 128-bit integers, reduced after every operation.
/// Overflow is detected and thrown, never wrapped.
class Rational {
 public:
  using Int = __int128;

  Rational() : num_(0), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}  // NOLINT: implicit by design
  Rational(Int num, Int den);

  static Rational factorial(int n);
  static Rational binomial(int n, int k);
  /// Rising factorial (a)_m for integer a (may be negative or zero).
  static Rational pochhammer(long long a, int m);
  /// (-h)_l with the pole-avoiding convention (-1)^l h!/(h-l)!.
  static Rational pochhammer_neg(int h, int l);

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool is_zero() const { return num_ == 0; }
  Rational abs() const;

  double to_double() const;
  std::string to_string() const;

  Int num() const { return num_; }
  Int den() const { return den_; }

 private:
  void reduce();
  Int num_, den_;  // den_ > 0, gcd(num_, den_) == 1
};

}  // namespace cliff
