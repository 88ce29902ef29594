#include "qdrg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>

namespace qdrg {

void ToleranceContext::validate() const {
  if (!(rank_threshold > 0 && cluster_width > 0 && residual_bound > 0)) {
    throw UsageError("tolerances must be strictly positive");
  }
  if (cluster_width < rank_threshold) {
    throw UsageError("cluster width must be at least the rank threshold");
  }
}

std::string ScalarTraits<double>::to_string(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// Elementary helpers

template <class S>
Mat<S> multiply(const Mat<S>& a, const Mat<S>& b) {
  if (a.cols() != b.rows()) throw UsageError("multiply: inner dimensions differ");
  if constexpr (!is_exact_v<S>) {
    return a * b;
  } else {
    Mat<S> out = Mat<S>::Zero(a.rows(), b.cols());
    std::vector<std::vector<Index>> nz(static_cast<std::size_t>(a.cols()));
    for (Index k = 0; k < a.cols(); ++k) {
      for (Index i = 0; i < a.rows(); ++i) {
        if (!a(i, k).is_zero()) nz[static_cast<std::size_t>(k)].push_back(i);
      }
    }
    for (Index j = 0; j < b.cols(); ++j) {
      for (Index k = 0; k < b.rows(); ++k) {
        const S& bkj = b(k, j);
        if (bkj.is_zero()) continue;
        for (Index i : nz[static_cast<std::size_t>(k)]) out(i, j) += a(i, k) * bkj;
      }
    }
    return out;
  }
}

template <class S>
Vec<S> vectorize(const Mat<S>& m) {
  Vec<S> v(m.size());
  Index t = 0;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) v[t++] = m(i, j);
  }
  return v;
}

template <class S>
Mat<S> unvectorize(const Vec<S>& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw UsageError("unvectorize: size mismatch");
  Mat<S> m(rows, cols);
  Index t = 0;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = v[t++];
  }
  return m;
}

template <class S>
S trace_inner(const Mat<S>& a, const Mat<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw UsageError("trace_inner: shape mismatch");
  S acc(0);
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if constexpr (is_exact_v<S>) {
        if (a(i, j).is_zero() || b(i, j).is_zero()) continue;
      }
      acc += a(i, j) * b(i, j);
    }
  }
  return acc;
}

template <class S>
double max_abs(const Mat<S>& m) {
  double best = 0.0;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) best = std::max(best, ScalarTraits<S>::magnitude(m(i, j)));
  }
  return best;
}

template <class S>
double residual(const Mat<S>& a, const Mat<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw UsageError("residual: shape mismatch");
  double best = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if constexpr (is_exact_v<S>) {
        if (a(i, j) == b(i, j)) continue;
        const double d = std::abs((a(i, j) - b(i, j)).to_double());
        best = std::max(best, d > 0 ? d : std::numeric_limits<double>::denorm_min());
      } else {
        best = std::max(best, std::abs(a(i, j) - b(i, j)));
      }
    }
  }
  return best;
}

template <class S>
bool is_zero_matrix(const Mat<S>& m, double tol) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!ScalarTraits<S>::is_zero(m(i, j), tol)) return false;
    }
  }
  return true;
}

Mat<Exact> clear_denominators(const Mat<Exact>& m) {
  mpz_class l = 1;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      const Exact& x = m(i, j);
      if (!x.rational_part().is_integer()) l = lcm_denominator(x.rational_part(), l);
      if (!x.surd_part().is_integer()) l = lcm_denominator(x.surd_part(), l);
    }
  }
  if (l == 1) return m;
  const Exact f{Rational{mpq_class(l)}};
  return m.unaryExpr([&](const Exact& x) { return x.is_zero() ? x : x * f; });
}

// ---------------------------------------------------------------------------
// SpanTracker

template <class S>
SpanTracker<S>::SpanTracker(Index dim, ToleranceContext ctx) : dim_(dim), ctx_(ctx) {}

template <class S>
double SpanTracker<S>::threshold(double vnorm) const {
  return ctx_.rank_threshold * std::max(vnorm, scale_);
}

template <class S>
typename SpanTracker<S>::Reduction SpanTracker<S>::reduce(const Vec<S>& v) const {
  if (v.size() != dim_) throw UsageError("SpanTracker: vector length mismatch");
  Reduction r;
  r.remainder = v;
  r.weights.assign(rows_.size(), S(0));
  if constexpr (is_exact_v<S>) {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const S c = v[pivots_[k]];
      r.weights[k] = c;
      if (c.is_zero()) continue;
      for (Index idx : support_[k]) r.remainder[idx] -= c * rows_[k][idx];
    }
    r.norm = 0.0;
    for (Index i = 0; i < dim_; ++i) {
      if (!r.remainder[i].is_zero()) {
        r.norm = std::max(r.norm, std::abs(r.remainder[i].to_double()));
        if (r.norm == 0.0) r.norm = std::numeric_limits<double>::denorm_min();
      }
    }
  } else {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < rows_.size(); ++k) {
        const double c = rows_[k].dot(r.remainder);
        r.weights[k] += c;
        r.remainder -= c * rows_[k];
      }
    }
    r.norm = r.remainder.norm();
  }
  return r;
}

template <class S>
bool SpanTracker<S>::insert(const Vec<S>& v) {
  Reduction r = reduce(v);
  const std::size_t accepted = rows_.size();
  if constexpr (is_exact_v<S>) {
    Index p = -1;
    for (Index i = 0; i < dim_; ++i) {
      if (!r.remainder[i].is_zero()) {
        p = i;
        break;
      }
    }
    if (p < 0) return false;
    const S piv = r.remainder[p];
    Vec<S> row = r.remainder;
    std::vector<Index> sup;
    for (Index i = 0; i < dim_; ++i) {
      if (!row[i].is_zero()) {
        row[i] /= piv;
        sup.push_back(i);
      }
    }
    std::vector<S> cnew(accepted + 1, S(0));
    for (std::size_t k = 0; k < accepted; ++k) {
      if (r.weights[k].is_zero()) continue;
      for (std::size_t j = 0; j < accepted; ++j) {
        if (!coef_[k][j].is_zero()) cnew[j] -= r.weights[k] * coef_[k][j];
      }
    }
    cnew[accepted] = S(1);
    for (auto& c : cnew) c /= piv;
    for (std::size_t k = 0; k < accepted; ++k) {
      coef_[k].push_back(S(0));
      const S f = rows_[k][p];
      if (f.is_zero()) continue;
      for (Index idx : sup) rows_[k][idx] -= f * row[idx];
      support_[k].clear();
      for (Index i = 0; i < dim_; ++i) {
        if (!rows_[k][i].is_zero()) support_[k].push_back(i);
      }
      for (std::size_t j = 0; j <= accepted; ++j) {
        if (!cnew[j].is_zero()) coef_[k][j] -= f * cnew[j];
      }
    }
    rows_.push_back(std::move(row));
    support_.push_back(std::move(sup));
    pivots_.push_back(p);
    coef_.push_back(std::move(cnew));
    return true;
  } else {
    const double vnorm = v.norm();
    const bool independent = r.norm > threshold(vnorm) && r.norm > 0.0;
    scale_ = std::max(scale_, vnorm);
    if (!independent) return false;
    std::vector<double> cnew(accepted + 1, 0.0);
    for (std::size_t k = 0; k < accepted; ++k) {
      for (std::size_t j = 0; j < accepted; ++j) cnew[j] -= r.weights[k] * coef_[k][j];
    }
    cnew[accepted] = 1.0;
    for (auto& c : cnew) c /= r.norm;
    for (auto& c : coef_) c.push_back(0.0);
    rows_.push_back(r.remainder / r.norm);
    coef_.push_back(std::move(cnew));
    return true;
  }
}

template <class S>
bool SpanTracker<S>::contains(const Vec<S>& v) const {
  const Reduction r = reduce(v);
  if constexpr (is_exact_v<S>) {
    return r.norm == 0.0;
  } else {
    return r.norm <= threshold(v.norm());
  }
}

template <class S>
double SpanTracker<S>::residual_norm(const Vec<S>& v) const {
  return reduce(v).norm;
}

template <class S>
std::optional<Vec<S>> SpanTracker<S>::coordinates(const Vec<S>& v) const {
  const Reduction r = reduce(v);
  if constexpr (is_exact_v<S>) {
    if (r.norm != 0.0) return std::nullopt;
  } else {
    if (r.norm > threshold(v.norm())) return std::nullopt;
  }
  const std::size_t n = rows_.size();
  Vec<S> out = Vec<S>::Zero(static_cast<Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    if (ScalarTraits<S>::is_zero(r.weights[k], 0.0)) continue;
    for (std::size_t j = 0; j < n; ++j) out[static_cast<Index>(j)] += r.weights[k] * coef_[k][j];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matrix-set bases

namespace {

template <class S>
void check_same_shape(const std::vector<Mat<S>>& mats) {
  for (const auto& m : mats) {
    if (m.rows() != mats.front().rows() || m.cols() != mats.front().cols()) {
      throw UsageError("matrix set: shape mismatch");
    }
  }
}

}  // namespace

template <class S>
std::vector<Mat<S>> gram_trace_basis(const std::vector<Mat<S>>& mats, const ToleranceContext& ctx) {
  if (mats.empty()) return {};
  check_same_shape(mats);
  const Index r = mats.front().rows();
  const Index c = mats.front().cols();
  SpanTracker<S> span(r * c, ctx);
  std::vector<Mat<S>> out;
  for (const auto& m : mats) {
    if (span.insert(vectorize(m))) {
      if constexpr (is_exact_v<S>) out.push_back(m);
    }
  }
  if constexpr (!is_exact_v<S>) {
    for (const auto& row : span.rows()) out.push_back(unvectorize<S>(row, r, c));
  }
  return out;
}

template <class S>
Index matrix_set_rank(const std::vector<Mat<S>>& mats, const ToleranceContext& ctx) {
  if (mats.empty()) return 0;
  check_same_shape(mats);
  SpanTracker<S> span(mats.front().size(), ctx);
  for (const auto& m : mats) span.insert(vectorize(m));
  return span.size();
}

template <class S>
Index rank(const Mat<S>& m, const ToleranceContext& ctx) {
  SpanTracker<S> span(m.rows(), ctx);
  for (Index j = 0; j < m.cols(); ++j) span.insert(m.col(j));
  return span.size();
}

template <class S>
Mat<S> nullspace(const Mat<S>& m, const ToleranceContext& ctx) {
  const Index cols = m.cols();
  if constexpr (is_exact_v<S>) {
    Mat<S> a = m;
    std::vector<Index> pivcol;
    Index row = 0;
    for (Index col = 0; col < cols && row < a.rows(); ++col) {
      Index sel = -1;
      for (Index i = row; i < a.rows(); ++i) {
        if (!a(i, col).is_zero()) {
          sel = i;
          break;
        }
      }
      if (sel < 0) continue;
      a.row(row).swap(a.row(sel));
      const S piv = a(row, col);
      for (Index j = col; j < cols; ++j) {
        if (!a(row, j).is_zero()) a(row, j) /= piv;
      }
      for (Index i = 0; i < a.rows(); ++i) {
        if (i == row || a(i, col).is_zero()) continue;
        const S f = a(i, col);
        for (Index j = col; j < cols; ++j) {
          if (!a(row, j).is_zero()) a(i, j) -= f * a(row, j);
        }
      }
      pivcol.push_back(col);
      ++row;
    }
    std::vector<bool> is_piv(static_cast<std::size_t>(cols), false);
    for (Index c : pivcol) is_piv[static_cast<std::size_t>(c)] = true;
    std::vector<Index> free;
    for (Index c = 0; c < cols; ++c) {
      if (!is_piv[static_cast<std::size_t>(c)]) free.push_back(c);
    }
    Mat<S> out = Mat<S>::Zero(cols, static_cast<Index>(free.size()));
    for (std::size_t f = 0; f < free.size(); ++f) {
      out(free[f], static_cast<Index>(f)) = S(1);
      for (std::size_t r = 0; r < pivcol.size(); ++r) {
        out(pivcol[r], static_cast<Index>(f)) = -a(static_cast<Index>(r), free[f]);
      }
    }
    return out;
  } else {
    if (m.rows() == 0) return Mat<double>::Identity(cols, cols);
    Eigen::BDCSVD<Mat<double>> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = sv.size() > 0 ? sv[0] : 0.0;
    const double tol = ctx.rank_threshold * std::max(top, 1.0);
    Index r = 0;
    while (r < sv.size() && sv[r] > tol) ++r;
    return svd.matrixV().rightCols(cols - r);
  }
}

// ---------------------------------------------------------------------------
// Subspaces

template <class S>
SubspaceBasis<S> SubspaceBasis<S>::whole(Index n) {
  return SubspaceBasis<S>{n, Mat<S>::Identity(n, n)};
}

template <class S>
SubspaceBasis<S> SubspaceBasis<S>::empty(Index n) {
  return SubspaceBasis<S>{n, Mat<S>(n, 0)};
}

template <class S>
SubspaceBasis<S> SubspaceBasis<S>::span_of(const Mat<S>& m, const ToleranceContext& ctx) {
  SpanTracker<S> span(m.rows(), ctx);
  std::vector<Index> chosen;
  for (Index j = 0; j < m.cols(); ++j) {
    if (span.insert(m.col(j))) chosen.push_back(j);
  }
  SubspaceBasis<S> out{m.rows(), Mat<S>(m.rows(), static_cast<Index>(chosen.size()))};
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    if constexpr (is_exact_v<S>) {
      out.vectors.col(static_cast<Index>(k)) = m.col(chosen[k]);
    } else {
      out.vectors.col(static_cast<Index>(k)) = span.rows()[k];
    }
  }
  return out;
}

template <class S>
SubspaceBasis<S> intersect(const SubspaceBasis<S>& u, const SubspaceBasis<S>& w, const ToleranceContext& ctx) {
  if (u.ambient != w.ambient) throw UsageError("intersect: ambient dimension mismatch");
  if (u.dim() == 0 || w.dim() == 0) return SubspaceBasis<S>::empty(u.ambient);
  Mat<S> joint(u.ambient, u.dim() + w.dim());
  joint << u.vectors, -w.vectors;
  const Mat<S> ns = nullspace<S>(joint, ctx);
  return SubspaceBasis<S>::span_of(multiply<S>(u.vectors, ns.topRows(u.dim())), ctx);
}

template <class S>
SubspaceBasis<S> orthogonal_complement_within(const SubspaceBasis<S>& u, const SubspaceBasis<S>& w,
                                              const ToleranceContext& ctx) {
  if (u.ambient != w.ambient) throw UsageError("orthogonal_complement_within: ambient dimension mismatch");
  if (u.dim() == 0) return SubspaceBasis<S>::span_of(w.vectors, ctx);
  if (w.dim() == 0) return SubspaceBasis<S>::empty(w.ambient);
  const Mat<S> ut = u.vectors.transpose();
  const Mat<S> ns = nullspace<S>(multiply<S>(ut, w.vectors), ctx);
  return SubspaceBasis<S>::span_of(multiply<S>(w.vectors, ns), ctx);
}

template <class S>
SubspaceBasis<S> project(const Mat<S>& p, const SubspaceBasis<S>& u, const ToleranceContext& ctx) {
  if (p.cols() != u.ambient) throw UsageError("project: dimension mismatch");
  return SubspaceBasis<S>::span_of(multiply<S>(p, u.vectors), ctx);
}

template <class S>
bool same_span(const SubspaceBasis<S>& u, const SubspaceBasis<S>& w, const ToleranceContext& ctx) {
  if (u.ambient != w.ambient) return false;
  Mat<S> joint(u.ambient, u.dim() + w.dim());
  joint << u.vectors, w.vectors;
  const Index r = rank<S>(joint, ctx);
  return r == rank<S>(u.vectors, ctx) && r == rank<S>(w.vectors, ctx);
}

// ---------------------------------------------------------------------------
// Spectra

void jacobi_eigen(const Mat<double>& m, Vec<double>& values, Mat<double>& vectors) {
  const Index n = m.rows();
  Mat<double> a = (m + m.transpose()) / 2.0;
  Mat<double> v = Mat<double>::Identity(n, n);
  const double frob = a.norm();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off <= 1e-30 * frob * frob || off == 0.0) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return a(x, x) < a(y, y); });
  values.resize(n);
  vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    values[k] = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
}

std::vector<EigenSpace> symmetric_eigendecomposition(const Mat<double>& m, const ToleranceContext& ctx) {
  if (m.rows() != m.cols()) throw UsageError("symmetric_eigendecomposition: matrix not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > ctx.residual_bound * scale) {
    throw UsageError("symmetric_eigendecomposition: matrix is not symmetric");
  }
  Vec<double> values;
  Mat<double> vectors;
  jacobi_eigen(m, values, vectors);
  const Index n = m.rows();
  const double radius = n > 0 ? values.cwiseAbs().maxCoeff() : 0.0;
  const double width = ctx.cluster_width * radius;

  // Union-find over the sorted list; only neighbours can merge.
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (Index k = 1; k < n; ++k) {
    if (values[k] - values[k - 1] <= width) parent[static_cast<std::size_t>(find(k))] = find(k - 1);
  }
  std::vector<EigenSpace> out;
  for (Index k = 0; k < n;) {
    Index e = k;
    while (e < n && find(e) == find(k)) ++e;
    EigenSpace es;
    es.value = values.segment(k, e - k).mean();
    es.space = SubspaceBasis<double>{n, vectors.middleCols(k, e - k)};
    out.push_back(std::move(es));
    k = e;
  }
  std::reverse(out.begin(), out.end());

  Mat<double> rebuilt = Mat<double>::Zero(n, n);
  for (const auto& es : out) rebuilt += es.value * es.space.vectors * es.space.vectors.transpose();
  const double res = n > 0 ? (m - rebuilt).cwiseAbs().maxCoeff() : 0.0;
  if (res > ctx.residual_bound * std::max(1.0, radius)) {
    throw VerificationError("eigendecomposition reconstruction residual " + std::to_string(res) + " exceeds bound",
                            "A = sum theta_i E_i", res);
  }
  return out;
}

namespace {

// Polynomials over Q, coefficients low to high.
using Poly = std::vector<Rational>;

void trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Rational evaluate(const Poly& p, const Rational& x) {
  Rational acc;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Returns quotient; sets remainder.
Poly divide(Poly num, const Poly& den, Poly& rem) {
  trim(num);
  Poly q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0);
  while (num.size() >= den.size() && !num.empty()) {
    const std::size_t shift = num.size() - den.size();
    const Rational f = num.back() / den.back();
    q[shift] = f;
    for (std::size_t i = 0; i < den.size(); ++i) num[shift + i] -= f * den[i];
    trim(num);
  }
  rem = num;
  return q;
}

bool is_perfect_square(long v, long& root) {
  if (v < 0) return false;
  root = static_cast<long>(std::llround(std::sqrt(static_cast<double>(v))));
  while (root * root > v) --root;
  while ((root + 1) * (root + 1) <= v) ++root;
  return root * root == v;
}

long spectral_bound(const Mat<Exact>& a) {
  long best = 0;
  for (Index i = 0; i < a.rows(); ++i) {
    Rational s;
    for (Index j = 0; j < a.cols(); ++j) s += abs(a(i, j).rational_part());
    best = std::max(best, static_cast<long>(std::ceil(s.to_double())));
  }
  return best;
}

void require_integral_symmetric(const Mat<Exact>& a) {
  if (a.rows() != a.cols()) throw UsageError("spectrum: matrix not square");
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (!a(i, j).is_rational() || !a(i, j).rational_part().is_integer()) {
        throw UsageError("spectrum: matrix must have integer entries");
      }
      if (!(a(i, j) == a(j, i))) throw UsageError("spectrum: matrix must be symmetric");
    }
  }
}

}  // namespace

std::vector<Rational> minimal_polynomial(const Mat<Exact>& a) {
  if (a.rows() != a.cols()) throw UsageError("minimal_polynomial: matrix not square");
  const Index n = a.rows();
  SpanTracker<Exact> span(n * n);
  Mat<Exact> power = Mat<Exact>::Identity(n, n);
  for (Index d = 0; d <= n; ++d) {
    const Vec<Exact> v = vectorize(power);
    if (!span.insert(v)) {
      const auto c = span.coordinates(v);
      Poly p(static_cast<std::size_t>(d) + 1);
      for (Index j = 0; j < d; ++j) {
        if (!(*c)[j].is_rational()) throw UsageError("minimal_polynomial: irrational coefficient");
        p[static_cast<std::size_t>(j)] = -(*c)[j].rational_part();
      }
      p[static_cast<std::size_t>(d)] = Rational{1};
      return p;
    }
    power = multiply<Exact>(power, a);
  }
  throw Error("minimal_polynomial: degree exceeded matrix size");
}

std::optional<std::vector<long>> integer_spectrum(const Mat<Exact>& a) {
  require_integral_symmetric(a);
  const Poly p = minimal_polynomial(a);
  const long bound = spectral_bound(a);
  std::vector<long> roots;
  for (long t = bound; t >= -bound; --t) {
    if (evaluate(p, Rational{t}).is_zero()) roots.push_back(t);
  }
  if (roots.size() + 1 != p.size()) return std::nullopt;
  return roots;
}

std::optional<std::vector<Exact>> quadratic_spectrum(const Mat<Exact>& a) {
  require_integral_symmetric(a);
  Poly rest = minimal_polynomial(a);
  const long bound = spectral_bound(a);
  std::vector<Exact> roots;
  for (long t = bound; t >= -bound; --t) {
    Poly rem;
    const Poly lin{Rational{-t}, Rational{1}};
    Poly q = divide(rest, lin, rem);
    if (rem.empty()) {
      roots.emplace_back(Rational{t});
      rest = q;
    }
  }
  long field = 0;
  // Remaining monic integer factor: peel off quadratics x^2 + b x + c with
  // irrational real roots (-b +- s sqrt(m)) / 2.
  while (rest.size() > 1) {
    bool found = false;
    for (long b = -2 * bound; b <= 2 * bound && !found; ++b) {
      for (long c = -bound * bound; c <= bound * bound && !found; ++c) {
        const long disc = b * b - 4 * c;
        long root = 0;
        if (disc <= 0 || is_perfect_square(disc, root)) continue;
        Poly rem;
        const Poly quad{Rational{c}, Rational{b}, Rational{1}};
        Poly q = divide(rest, quad, rem);
        if (!rem.empty()) continue;
        const long m = squarefree_part(disc);
        if (field != 0 && field != m) return std::nullopt;
        field = m;
        long s = 0;
        is_perfect_square(disc / m, s);
        roots.emplace_back(Rational(-b, 2), Rational(s, 2), m);
        roots.emplace_back(Rational(-b, 2), Rational(-s, 2), m);
        rest = q;
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  std::sort(roots.begin(), roots.end(), [](const Exact& x, const Exact& y) { return x > y; });
  return roots;
}

// ---------------------------------------------------------------------------
// Instantiations

#define QDRG_INSTANTIATE(S)                                                                                  \
  template Mat<S> multiply<S>(const Mat<S>&, const Mat<S>&);                                                 \
  template Vec<S> vectorize<S>(const Mat<S>&);                                                               \
  template Mat<S> unvectorize<S>(const Vec<S>&, Index, Index);                                               \
  template S trace_inner<S>(const Mat<S>&, const Mat<S>&);                                                   \
  template double max_abs<S>(const Mat<S>&);                                                                 \
  template double residual<S>(const Mat<S>&, const Mat<S>&);                                                 \
  template bool is_zero_matrix<S>(const Mat<S>&, double);                                                    \
  template class SpanTracker<S>;                                                                             \
  template std::vector<Mat<S>> gram_trace_basis<S>(const std::vector<Mat<S>>&, const ToleranceContext&);     \
  template Index matrix_set_rank<S>(const std::vector<Mat<S>>&, const ToleranceContext&);                    \
  template Index rank<S>(const Mat<S>&, const ToleranceContext&);                                            \
  template Mat<S> nullspace<S>(const Mat<S>&, const ToleranceContext&);                                      \
  template struct SubspaceBasis<S>;                                                                          \
  template SubspaceBasis<S> intersect<S>(const SubspaceBasis<S>&, const SubspaceBasis<S>&,                   \
                                         const ToleranceContext&);                                           \
  template SubspaceBasis<S> orthogonal_complement_within<S>(const SubspaceBasis<S>&, const SubspaceBasis<S>&, \
                                                            const ToleranceContext&);                        \
  template SubspaceBasis<S> project<S>(const Mat<S>&, const SubspaceBasis<S>&, const ToleranceContext&);     \
  template bool same_span<S>(const SubspaceBasis<S>&, const SubspaceBasis<S>&, const ToleranceContext&);

QDRG_INSTANTIATE(Exact)
QDRG_INSTANTIATE(double)

#undef QDRG_INSTANTIATE

}  // namespace qdrg
