#ifndef QDRG_QUADRATIC_HPP
#define QDRG_QUADRATIC_HPP

#include <compare>
#include <iosfwd>
#include <string>

#include "qdrg/rational.hpp"

namespace qdrg {

// Element a + b*sqrt(m) of a real quadratic field, with a, b rational and m a
// squarefree integer >= 2.  Pure rationals carry m = 0.  This is the exact
// scalar domain: integral graphs never leave Q, and graphs such as the cycles
// whose spectrum splits over one quadratic field stay exact as well.
//
// Combining two irrational values from different fields throws
// std::domain_error.
class RealQuadratic {
 public:
  RealQuadratic() noexcept = default;
  RealQuadratic(int v) noexcept : a_(v) {}
  RealQuadratic(long v) noexcept : a_(v) {}
  RealQuadratic(long long v) noexcept : a_(v) {}
  RealQuadratic(Rational a) noexcept : a_(std::move(a)) {}
  RealQuadratic(Rational a, Rational b, long m);

  static RealQuadratic sqrt_of(long m);  // sqrt(m) for squarefree m >= 2

  const Rational& rational_part() const noexcept { return a_; }
  const Rational& surd_part() const noexcept { return b_; }
  long radicand() const noexcept { return m_; }

  bool is_zero() const noexcept { return a_.is_zero() && b_.is_zero(); }
  bool is_rational() const noexcept { return b_.is_zero(); }
  int sign() const;
  double to_double() const;
  RealQuadratic conjugate() const;

  // "p/q" for rationals, "a+b*sqrt(m)" otherwise (both parts as p/q).
  std::string to_string() const;
  std::string to_json_string() const;
  static RealQuadratic parse(const std::string& text);

  RealQuadratic operator-() const;
  RealQuadratic& operator+=(const RealQuadratic& o) { return *this = *this + o; }
  RealQuadratic& operator-=(const RealQuadratic& o) { return *this = *this - o; }
  RealQuadratic& operator*=(const RealQuadratic& o) { return *this = *this * o; }
  RealQuadratic& operator/=(const RealQuadratic& o) { return *this = *this / o; }

  friend RealQuadratic operator+(const RealQuadratic& x, const RealQuadratic& y);
  friend RealQuadratic operator-(const RealQuadratic& x, const RealQuadratic& y);
  friend RealQuadratic operator*(const RealQuadratic& x, const RealQuadratic& y);
  friend RealQuadratic operator/(const RealQuadratic& x, const RealQuadratic& y);
  friend bool operator==(const RealQuadratic& x, const RealQuadratic& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.m_ == y.m_;
  }
  friend std::strong_ordering operator<=>(const RealQuadratic& x, const RealQuadratic& y);

 private:
  Rational a_;
  Rational b_;
  long m_ = 0;

  static long merge_radicand(long m1, long m2);
  void normalize() {
    if (b_.is_zero()) m_ = 0;
  }
};

std::ostream& operator<<(std::ostream& os, const RealQuadratic& x);

RealQuadratic abs(const RealQuadratic& x);

// Squarefree part of a positive integer.
long squarefree_part(long v);

}  // namespace qdrg

#endif  // QDRG_QUADRATIC_HPP
