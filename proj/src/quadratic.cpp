#include "qdrg/quadratic.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace qdrg {

long squarefree_part(long v) {
  if (v <= 0) throw std::domain_error("squarefree_part: non-positive argument");
  long out = 1;
  for (long p = 2; p * p <= v; ++p) {
    int e = 0;
    while (v % p == 0) {
      v /= p;
      ++e;
    }
    if (e % 2 == 1) out *= p;
  }
  return out * v;
}

RealQuadratic::RealQuadratic(Rational a, Rational b, long m) : a_(std::move(a)), b_(std::move(b)), m_(m) {
  if (!b_.is_zero() && (m < 2 || squarefree_part(m) != m)) {
    throw std::domain_error("RealQuadratic: radicand must be squarefree and >= 2");
  }
  normalize();
}

RealQuadratic RealQuadratic::sqrt_of(long m) { return RealQuadratic(Rational{}, Rational{1}, m); }

long RealQuadratic::merge_radicand(long m1, long m2) {
  if (m1 == 0) return m2;
  if (m2 == 0 || m1 == m2) return m1;
  throw std::domain_error("RealQuadratic: values from different quadratic fields (sqrt " + std::to_string(m1) +
                          " vs sqrt " + std::to_string(m2) + ")");
}

int RealQuadratic::sign() const {
  const int sa = a_.sign();
  const int sb = b_.sign();
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // a and b*sqrt(m) have opposite signs; compare a^2 with m*b^2.
  const auto c = (a_ * a_) <=> (Rational{m_} * b_ * b_);
  if (c == 0) return 0;  // impossible for squarefree m, kept for completeness
  return c > 0 ? sa : sb;
}

double RealQuadratic::to_double() const {
  if (b_.is_zero()) return a_.to_double();
  return a_.to_double() + b_.to_double() * std::sqrt(static_cast<double>(m_));
}

RealQuadratic RealQuadratic::conjugate() const {
  RealQuadratic r = *this;
  r.b_ = -b_;
  return r;
}

std::string RealQuadratic::to_string() const {
  if (b_.is_zero()) return a_.to_string();
  std::string s = a_.is_zero() ? std::string{} : a_.to_string();
  const bool neg = b_.sign() < 0;
  if (!s.empty()) s += neg ? "-" : "+";
  else if (neg) s += "-";
  const Rational mag = neg ? -b_ : b_;
  if (!mag.is_one()) s += mag.to_string() + "*";
  s += "sqrt(" + std::to_string(m_) + ")";
  return s;
}

std::string RealQuadratic::to_json_string() const {
  if (b_.is_zero()) return a_.to_fraction_string();
  return a_.to_fraction_string() + (b_.sign() < 0 ? "-" : "+") + (b_.sign() < 0 ? (-b_) : b_).to_fraction_string() +
         "*sqrt(" + std::to_string(m_) + ")";
}

RealQuadratic RealQuadratic::parse(const std::string& text) {
  const auto root = text.find("*sqrt(");
  if (root == std::string::npos) return RealQuadratic(Rational::parse(text));
  // a(+|-)b*sqrt(m); the sign separating a and b is the last +/- before b.
  const auto split = text.find_last_of("+-", root);
  if (split == std::string::npos) throw std::invalid_argument("RealQuadratic::parse: bad value '" + text + "'");
  const std::string a = split == 0 ? "0" : text.substr(0, split);
  const std::string b = text.substr(split + 1, root - split - 1);
  const auto close = text.find(')', root);
  const long m = std::stol(text.substr(root + 6, close - root - 6));
  Rational bb = Rational::parse(b);
  if (text[split] == '-') bb = -bb;
  return RealQuadratic(Rational::parse(a), bb, m);
}

RealQuadratic RealQuadratic::operator-() const {
  RealQuadratic r;
  r.a_ = -a_;
  r.b_ = -b_;
  r.m_ = m_;
  return r;
}

RealQuadratic operator+(const RealQuadratic& x, const RealQuadratic& y) {
  if (x.m_ == 0 && y.m_ == 0) return RealQuadratic(x.a_ + y.a_);
  RealQuadratic r;
  r.m_ = RealQuadratic::merge_radicand(x.m_, y.m_);
  r.a_ = x.a_ + y.a_;
  r.b_ = x.b_ + y.b_;
  r.normalize();
  return r;
}

RealQuadratic operator-(const RealQuadratic& x, const RealQuadratic& y) { return x + (-y); }

RealQuadratic operator*(const RealQuadratic& x, const RealQuadratic& y) {
  if (x.m_ == 0 && y.m_ == 0) return RealQuadratic(x.a_ * y.a_);
  RealQuadratic r;
  r.m_ = RealQuadratic::merge_radicand(x.m_, y.m_);
  r.a_ = x.a_ * y.a_ + Rational{r.m_} * x.b_ * y.b_;
  r.b_ = x.a_ * y.b_ + x.b_ * y.a_;
  r.normalize();
  return r;
}

RealQuadratic operator/(const RealQuadratic& x, const RealQuadratic& y) {
  if (y.is_zero()) throw std::domain_error("RealQuadratic: division by zero");
  if (y.m_ == 0) {
    if (x.m_ == 0) return RealQuadratic(x.a_ / y.a_);
    RealQuadratic r;
    r.a_ = x.a_ / y.a_;
    r.b_ = x.b_ / y.a_;
    r.m_ = x.m_;
    r.normalize();
    return r;
  }
  const Rational norm = y.a_ * y.a_ - Rational{y.m_} * y.b_ * y.b_;
  RealQuadratic num = x * y.conjugate();
  num.a_ /= norm;
  num.b_ /= norm;
  num.normalize();
  return num;
}

std::strong_ordering operator<=>(const RealQuadratic& x, const RealQuadratic& y) {
  const int s = (x - y).sign();
  return s < 0 ? std::strong_ordering::less : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::ostream& operator<<(std::ostream& os, const RealQuadratic& x) { return os << x.to_string(); }

RealQuadratic abs(const RealQuadratic& x) { return x.sign() < 0 ? -x : x; }

}  // namespace qdrg
