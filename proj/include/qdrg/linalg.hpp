#ifndef QDRG_LINALG_HPP
#define QDRG_LINALG_HPP

#include <optional>
#include <vector>

#include "qdrg/errors.hpp"
#include "qdrg/scalar.hpp"

namespace qdrg {

// ---------------------------------------------------------------------------
// Elementary helpers

// Product that skips zero entries on the exact path; plain Eigen product on
// the float path.  Most exact operands here are 0/1 or diagonal.
template <class S>
Mat<S> multiply(const Mat<S>& a, const Mat<S>& b);

// Row-major flattening.
template <class S>
Vec<S> vectorize(const Mat<S>& m);

template <class S>
Mat<S> unvectorize(const Vec<S>& v, Index rows, Index cols);

// <a, b> = trace(a^T b), the sum of the entrywise product.
template <class S>
S trace_inner(const Mat<S>& a, const Mat<S>& b);

template <class S>
bool is_zero_matrix(const Mat<S>& m, double tol);

template <class S>
double max_abs(const Mat<S>& m);

// Max-abs entry of a - b, as a double (exactly 0 on the exact path iff equal).
template <class S>
double residual(const Mat<S>& a, const Mat<S>& b);

// Multiplies by the lcm of all denominators so every entry lies in Z[sqrt m].
// Spans are unaffected and products run on the integer fast path.
Mat<Exact> clear_denominators(const Mat<Exact>& m);

// ---------------------------------------------------------------------------
// SpanTracker: incremental linear span of vectors.
//
// Exact: kept in reduced row-echelon form with unit pivots.  Float: kept as an
// orthonormal list built by classical Gram-Schmidt with one reorthogonalization
// pass.  Both record how each internal row combines the accepted inputs, so
// coordinates with respect to the accepted inputs can be recovered.
template <class S>
class SpanTracker {
 public:
  explicit SpanTracker(Index dim, ToleranceContext ctx = {});

  Index dim() const noexcept { return dim_; }
  Index size() const noexcept { return static_cast<Index>(rows_.size()); }

  // Adds v when it is independent of the current span; returns whether it was.
  bool insert(const Vec<S>& v);
  bool contains(const Vec<S>& v) const;
  // Norm of the component outside the span (max-abs on the exact path).
  double residual_norm(const Vec<S>& v) const;
  // Coefficients of v on the accepted inputs, in insertion order.
  std::optional<Vec<S>> coordinates(const Vec<S>& v) const;
  // Orthonormal (float) or echelon (exact) rows spanning the space.
  const std::vector<Vec<S>>& rows() const noexcept { return rows_; }

 private:
  struct Reduction {
    Vec<S> remainder;
    std::vector<S> weights;  // one per internal row
    double norm = 0.0;
  };
  Reduction reduce(const Vec<S>& v) const;
  double threshold(double vnorm) const;

  Index dim_;
  ToleranceContext ctx_;
  std::vector<Vec<S>> rows_;
  std::vector<std::vector<Index>> support_;  // exact: nonzero positions of each row
  std::vector<Index> pivots_;                // exact: pivot column of each row
  std::vector<std::vector<S>> coef_;         // row k = sum_j coef_[k][j] * input_j
  double scale_ = 0.0;
};

// ---------------------------------------------------------------------------
// Trace-form bases of matrix sets.
//
// Exact: the greedy maximal independent subset of the inputs (in order).
// Float: an orthonormal basis under <M, N> = trace(M^T N).
// Empty input gives an empty output; mismatched shapes throw UsageError.
template <class S>
std::vector<Mat<S>> gram_trace_basis(const std::vector<Mat<S>>& mats, const ToleranceContext& ctx = {});

template <class S>
Index matrix_set_rank(const std::vector<Mat<S>>& mats, const ToleranceContext& ctx = {});

// Column rank.
template <class S>
Index rank(const Mat<S>& m, const ToleranceContext& ctx = {});

// Basis (columns) of {x : m x = 0}.
template <class S>
Mat<S> nullspace(const Mat<S>& m, const ToleranceContext& ctx = {});

// ---------------------------------------------------------------------------
// Subspaces

// Columns of `vectors` form a basis: orthonormal in the float domain, linearly
// independent in the exact domain.
template <class S>
struct SubspaceBasis {
  Index ambient = 0;
  Mat<S> vectors;

  Index dim() const noexcept { return vectors.cols(); }
  static SubspaceBasis whole(Index n);
  // Basis of the column span of m (re-orthonormalized on the float path).
  static SubspaceBasis span_of(const Mat<S>& m, const ToleranceContext& ctx = {});
  static SubspaceBasis empty(Index n);
};

template <class S>
SubspaceBasis<S> intersect(const SubspaceBasis<S>& u, const SubspaceBasis<S>& w, const ToleranceContext& ctx = {});

// Elements of w orthogonal to u.
template <class S>
SubspaceBasis<S> orthogonal_complement_within(const SubspaceBasis<S>& u, const SubspaceBasis<S>& w,
                                              const ToleranceContext& ctx = {});

// Image P U.
template <class S>
SubspaceBasis<S> project(const Mat<S>& p, const SubspaceBasis<S>& u, const ToleranceContext& ctx = {});

template <class S>
bool same_span(const SubspaceBasis<S>& u, const SubspaceBasis<S>& w, const ToleranceContext& ctx = {});

// ---------------------------------------------------------------------------
// Spectra

struct EigenSpace {
  double value = 0.0;
  SubspaceBasis<double> space;
};

// Cyclic Jacobi on a dense symmetric matrix; eigenvalues ascending, vectors in
// the matching columns.
void jacobi_eigen(const Mat<double>& m, Vec<double>& values, Mat<double>& vectors);

// Eigenvalues clustered by ctx.cluster_width * spectral radius (union-find on
// the sorted list), eigenspaces orthonormal, sorted by descending value.
// Throws UsageError for non-symmetric input and VerificationError when the
// reconstruction residual exceeds ctx.residual_bound.
std::vector<EigenSpace> symmetric_eigendecomposition(const Mat<double>& m, const ToleranceContext& ctx = {});

// Coefficients c_0..c_d (low to high) of the monic minimal polynomial.
std::vector<Rational> minimal_polynomial(const Mat<Exact>& a);

// Distinct integer eigenvalues in descending order, or nullopt when some root
// of the minimal polynomial is not an integer.  `a` must be integral and
// symmetric.
std::optional<std::vector<long>> integer_spectrum(const Mat<Exact>& a);

// Distinct eigenvalues, descending, when every root of the minimal polynomial
// lies in Q or in one common field Q(sqrt m); nullopt otherwise.
std::optional<std::vector<Exact>> quadratic_spectrum(const Mat<Exact>& a);

}  // namespace qdrg

#endif  // QDRG_LINALG_HPP
