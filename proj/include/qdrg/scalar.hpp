#ifndef QDRG_SCALAR_HPP
#define QDRG_SCALAR_HPP

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "qdrg/quadratic.hpp"
#include "qdrg/rational.hpp"

namespace qdrg {

// The exact scalar domain.
using Exact = RealQuadratic;

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

// Tolerances for the float domain.  The exact domain ignores them.
struct ToleranceContext {
  double rank_threshold = 1e-9;   // relative to matrix scale
  double cluster_width = 1e-7;    // relative to spectral radius
  double residual_bound = 1e-8;   // verification residuals

  void validate() const;
};

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Exact> {
  static constexpr bool exact = true;
  static constexpr const char* domain = "exact";
  static bool is_zero(const Exact& x, double /*tol*/ = 0.0) { return x.is_zero(); }
  static double to_double(const Exact& x) { return x.to_double(); }
  static double magnitude(const Exact& x) { return std::abs(x.to_double()); }
  static std::string to_string(const Exact& x) { return x.to_json_string(); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* domain = "float";
  static bool is_zero(double x, double tol) { return std::abs(x) <= tol; }
  static double to_double(double x) { return x; }
  static double magnitude(double x) { return std::abs(x); }
  static std::string to_string(double x);
};

template <class S>
inline constexpr bool is_exact_v = ScalarTraits<S>::exact;

template <class S>
Mat<double> to_double(const Mat<S>& m) {
  if constexpr (std::is_same_v<S, double>) {
    return m;
  } else {
    return m.unaryExpr([](const S& x) { return ScalarTraits<S>::to_double(x); });
  }
}

// Converts an integer-valued matrix into the requested domain.
template <class S>
Mat<S> from_integers(const Eigen::MatrixXi& m) {
  return m.unaryExpr([](int v) { return S(v); });
}

}  // namespace qdrg

namespace Eigen {

template <>
struct NumTraits<qdrg::Rational> : GenericNumTraits<qdrg::Rational> {
  typedef qdrg::Rational Real;
  typedef qdrg::Rational NonInteger;
  typedef qdrg::Rational Nested;
  typedef qdrg::Rational Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 8,
    MulCost = 8
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<qdrg::RealQuadratic> : GenericNumTraits<qdrg::RealQuadratic> {
  typedef qdrg::RealQuadratic Real;
  typedef qdrg::RealQuadratic NonInteger;
  typedef qdrg::RealQuadratic Nested;
  typedef qdrg::RealQuadratic Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 16,
    MulCost = 16
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

#endif  // QDRG_SCALAR_HPP
