#ifndef QDRG_RATIONAL_HPP
#define QDRG_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qdrg {

// Exact rational number in lowest terms with a positive denominator.
//
// Values whose numerator and denominator fit in 64 bits are stored inline;
// anything larger is promoted to a shared, immutable GMP rational and demoted
// again as soon as a result fits.  Almost every quantity in this project
// (distance matrices, idempotents of integral graphs, word products in the
// Terwilliger algebra) stays on the inline path.
class Rational {
 public:
  Rational() noexcept = default;
  Rational(int v) noexcept : num_(v) {}
  Rational(long v) noexcept : num_(v) {}
  Rational(long long v) noexcept : num_(v) {}
  Rational(long long num, long long den);
  explicit Rational(const mpq_class& q);

  // Accepts "p", "-p", "p/q".
  static Rational parse(std::string_view text);

  bool is_zero() const noexcept { return !big_ && num_ == 0; }
  bool is_one() const noexcept { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const;
  int sign() const noexcept;

  // Only meaningful when the value is inline.
  bool is_small() const noexcept { return !big_; }
  std::int64_t small_num() const noexcept { return num_; }
  std::int64_t small_den() const noexcept { return den_; }

  mpq_class to_mpq() const;
  mpz_class numerator() const;
  mpz_class denominator() const;
  double to_double() const;
  // Always "p/q", also for integers ("3/1"); used for JSON.
  std::string to_fraction_string() const;
  // "p" for integers, "p/q" otherwise; used for humans.
  std::string to_string() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;

  static Rational from_wide(__int128 num, __int128 den);
  static Rational from_big(mpq_class q);
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational abs(const Rational& r);

// Least common multiple of denominators, used to clear fractions.
mpz_class lcm_denominator(const Rational& a, const mpz_class& acc);

}  // namespace qdrg

#endif  // QDRG_RATIONAL_HPP
