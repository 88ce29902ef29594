#ifndef QDRG_TERWILLIGER_HPP
#define QDRG_TERWILLIGER_HPP

#include <string>
#include <vector>

#include "qdrg/dual_algebra.hpp"

namespace qdrg {

struct ClosureCertificate {
  bool closed = false;            // generator * basis stays in the span
  bool transpose_closed = false;  // B^T stays in the span
  bool contains_unit = false;
  double max_residual = 0.0;
  long products_checked = 0;
};

template <class S>
struct MatrixAlgebra {
  Index ambient = 0;
  std::vector<Mat<S>> basis;
  std::vector<Mat<S>> generators;
  Mat<S> unit;
  std::string provenance;
  ClosureCertificate certificate;

  Index dim() const noexcept { return static_cast<Index>(basis.size()); }
};

struct GenerateOptions {
  Index cap = 5000;
  std::string provenance;
};

// Span of all words in the generators, with `unit` (identity when null) as the
// empty word.  Closure: left-multiply every new basis element by every
// generator until nothing new appears; the span of all words is exactly the
// generated algebra.  Throws GuardError past `cap` basis elements.
template <class S>
MatrixAlgebra<S> generate_algebra(const std::vector<Mat<S>>& generators, const ToleranceContext& ctx = {},
                                  const GenerateOptions& opt = {}, const Mat<S>* unit = nullptr);

// Re-expands every product of two basis elements; returns the max residual
// (0 exactly on the exact path when closed, +inf when some product escapes).
template <class S>
double pairwise_closure_residual(const MatrixAlgebra<S>& alg, const ToleranceContext& ctx = {});

// T(x) generated by A and the dual idempotents, built block by block: the
// basis is the union of bases of E*_i T E*_j.
template <class S>
MatrixAlgebra<S> terwilliger_algebra(const Graph& g, const BoseMesnerData<S>& bm, const DualData<S>& dual,
                                     const ToleranceContext& ctx = {}, Index cap = 5000);

template <class S>
struct CornerAlgebra {
  Mat<S> projector;
  std::vector<Mat<S>> basis;
  std::string name;

  Index dim() const noexcept { return static_cast<Index>(basis.size()); }
};

// Throws UsageError when P is not idempotent.
template <class S>
CornerAlgebra<S> corner(const MatrixAlgebra<S>& t, const Mat<S>& p, const std::string& name = {},
                        const ToleranceContext& ctx = {});

// Max |[B_i, B_j]| over basis pairs and max |B - B^T| over the basis.
template <class S>
double commutator_residual(const std::vector<Mat<S>>& basis);
template <class S>
double symmetry_residual(const std::vector<Mat<S>>& basis);

template <class S>
bool check_commutative(const std::vector<Mat<S>>& basis, const ToleranceContext& ctx = {});
template <class S>
bool check_all_symmetric(const std::vector<Mat<S>>& basis, const ToleranceContext& ctx = {});

struct DimensionCheck {
  std::string anchor;
  std::string description;
  Index lhs = 0;
  Index rhs = 0;
  bool pass() const noexcept { return lhs == rhs; }
};

struct CornerSuite {
  std::vector<std::string> names;
  std::vector<Index> dims;
  std::vector<double> commutator;
  std::vector<double> asymmetry;
  bool commutative = true;
  bool symmetric = true;
};

// E*_1 T E*_1, E_1 T E_1, E*_D T E*_D, E_D T E_D, in that order.
template <class S>
std::vector<CornerAlgebra<S>> corner_algebras(const MatrixAlgebra<S>& t, const BoseMesnerData<S>& bm,
                                                       const DualData<S>& dual, const ToleranceContext& ctx = {});

template <class S>
CornerSuite check_corners(const std::vector<CornerAlgebra<S>>& corners, const ToleranceContext& ctx = {});

// Corner dimensions against the algebras generated by the images of M and M*.
// `corners` as returned by corner_algebras.
template <class S>
std::vector<DimensionCheck> verify_corner_generation(const std::vector<CornerAlgebra<S>>& corners,
                                                     const BoseMesnerData<S>& bm, const DualData<S>& dual,
                                                     const ToleranceContext& ctx = {});

struct IdentityCheck {
  std::string anchor;
  std::string identity;
  double residual = 0.0;
  bool pass = false;
};

// Reduction rules, ideal identities and their duals, each as a matrix equation.
template <class S>
std::vector<IdentityCheck> verify_identities(const IntersectionData& data, const BoseMesnerData<S>& bm,
                                             const DualData<S>& dual, const ToleranceContext& ctx = {});

// Elements of E*_i M E*_i and E_i M* E_i are symmetric, all i.
template <class S>
bool local_symmetry(const BoseMesnerData<S>& bm, const DualData<S>& dual, const ToleranceContext& ctx = {});

}  // namespace qdrg

#endif  // QDRG_TERWILLIGER_HPP
