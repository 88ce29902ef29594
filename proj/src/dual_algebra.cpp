#include "qdrg/dual_algebra.hpp"

#include <algorithm>
#include <sstream>

namespace qdrg {

namespace {

template <class S>
void require(double res, double bound, const std::string& what) {
  const bool ok = is_exact_v<S> ? res == 0.0 : res <= bound;
  if (!ok) throw VerificationError(what + " fails (residual " + ScalarTraits<double>::to_string(res) + ")", what, res);
}

template <class S>
Mat<S> diag_matrix(const Vec<S>& d) {
  Mat<S> m = Mat<S>::Zero(d.size(), d.size());
  for (Index i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

template <class S>
double vec_residual(const Vec<S>& a, const Vec<S>& b) {
  return residual<S>(Mat<S>(a), Mat<S>(b));
}

}  // namespace

template <class S>
DualData<S> build_dual(const Graph& g, const BoseMesnerData<S>& bm, Index x, const ToleranceContext& ctx) {
  const int d = bm.diameter;
  const Index n = bm.order;
  if (x < 0 || x >= n) throw UsageError("base vertex " + std::to_string(x) + " out of range");
  std::vector<int> identity(static_cast<std::size_t>(d + 1));
  for (int i = 0; i <= d; ++i) identity[static_cast<std::size_t>(i)] = i;
  if (d >= 1 && !is_q_polynomial_ordering(bm.krein, identity)) {
    throw UsageError("idempotent ordering is not Q-polynomial", "Q-polynomial ordering");
  }
  const double bound = ctx.residual_bound;
  const S nx(static_cast<long>(n));

  DualData<S> out;
  out.base = x;
  std::vector<Vec<S>> es, as;
  for (int i = 0; i <= d; ++i) {
    Vec<S> e(n);
    for (Index y = 0; y < n; ++y) e[y] = S(g.distance(x, y) == i ? 1 : 0);
    const Vec<S> a = nx * bm.E[static_cast<std::size_t>(i)].row(x).transpose();
    out.sizes.push_back(static_cast<Index>(g.sphere(x, i).size()));
    out.Estar.push_back(diag_matrix<S>(e));
    out.Astar.push_back(diag_matrix<S>(a));
    es.push_back(e);
    as.push_back(a);
  }

  Vec<S> sum_e = Vec<S>::Zero(n), sum_a = Vec<S>::Zero(n);
  for (int i = 0; i <= d; ++i) {
    sum_e += es[static_cast<std::size_t>(i)];
    sum_a += as[static_cast<std::size_t>(i)];
  }
  require<S>(vec_residual<S>(sum_e, Vec<S>::Constant(n, S(1))), bound, "sum E*_i = I");
  require<S>(vec_residual<S>(as[0], Vec<S>::Constant(n, S(1))), bound, "A*_0 = I");
  require<S>(vec_residual<S>(sum_a, Vec<S>(nx * es[0])), bound, "sum A*_i = |X| E*_0");
  if (out.sizes[0] != 1) throw VerificationError("E*_0 V is not one-dimensional", "E*_0 V = F x");

  const auto& q = bm.krein;
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; j <= d; ++j) {
      Vec<S> lhs = as[static_cast<std::size_t>(i)].cwiseProduct(as[static_cast<std::size_t>(j)]);
      Vec<S> rhs = Vec<S>::Zero(n);
      for (int h = 0; h <= d; ++h) {
        rhs += q[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
               as[static_cast<std::size_t>(h)];
      }
      require<S>(vec_residual<S>(lhs, rhs), bound * std::max<double>(1.0, static_cast<double>(n)),
                 "A*_i A*_j = sum q^h_ij A*_h");
      // E*_i E*_j = delta_ij E*_i
      const Vec<S> ee = es[static_cast<std::size_t>(i)].cwiseProduct(es[static_cast<std::size_t>(j)]);
      require<S>(vec_residual<S>(ee, i == j ? es[static_cast<std::size_t>(i)] : Vec<S>::Zero(n)), bound,
                 "E*_i E*_j = delta_ij E*_i");
    }
  }

  // theta*_i: the value of A* on Gamma_i(x), which must be constant there.
  const Vec<S>& astar = d >= 1 ? as[1] : as[0];
  for (int i = 0; i <= d; ++i) {
    const auto cell = g.sphere(x, i);
    const S v = astar[cell.front()];
    for (Index y : cell) require<S>(ScalarTraits<S>::magnitude(astar[y] - v), bound, "A* constant on Gamma_i(x)");
    out.theta_star.push_back(v);
  }
  for (int i = 0; i <= d; ++i) {
    for (int j = i + 1; j <= d; ++j) {
      const double gap = ScalarTraits<S>::magnitude(out.theta_star[static_cast<std::size_t>(i)] -
                                                    out.theta_star[static_cast<std::size_t>(j)]);
      const bool distinct = is_exact_v<S> ? gap > 0.0 : gap > bound;
      if (!distinct) throw VerificationError("dual eigenvalues are not distinct", "theta*_i distinct");
    }
  }
  Vec<S> recon = Vec<S>::Zero(n);
  for (int i = 0; i <= d; ++i) recon += out.theta_star[static_cast<std::size_t>(i)] * es[static_cast<std::size_t>(i)];
  require<S>(vec_residual<S>(recon, astar), bound, "A* = sum theta*_i E*_i");
  return out;
}

template <class S>
TripleReport verify_triple_products(const IntersectionData& data, const BoseMesnerData<S>& bm, const DualData<S>& dual,
                                    const ToleranceContext& ctx) {
  TripleReport rep;
  const int d = bm.diameter;
  const Index n = bm.order;
  auto note = [&](const std::string& what, int h, int i, int j) {
    std::ostringstream os;
    os << what << " at (h,i,j) = (" << h << "," << i << "," << j << ")";
    rep.violations.push_back(os.str());
  };
  std::vector<Vec<S>> es, as;
  for (int i = 0; i <= d; ++i) {
    es.push_back(dual.Estar[static_cast<std::size_t>(i)].diagonal());
    as.push_back(dual.Astar[static_cast<std::size_t>(i)].diagonal());
  }
  // Squared Frobenius norm of E_i A*_h E_j is trace(E_i D E_j D) with D = A*_h,
  // an O(n^2) sum, exact on the exact path.
  for (int h = 0; h <= d; ++h) {
    for (int i = 0; i <= d; ++i) {
      for (int j = 0; j <= d; ++j) {
        const Mat<S>& ah = bm.A[static_cast<std::size_t>(h)];
        bool zero = true;
        for (Index y = 0; y < n && zero; ++y) {
          if (ScalarTraits<S>::is_zero(es[static_cast<std::size_t>(i)][y], 0.5)) continue;
          for (Index z = 0; z < n; ++z) {
            if (!ScalarTraits<S>::is_zero(es[static_cast<std::size_t>(j)][z], 0.5) && !ScalarTraits<S>::is_zero(ah(y, z), 0.5)) {
              zero = false;
              break;
            }
          }
        }
        ++rep.checked;
        if (zero != (data(h, i, j) == 0)) note("E*_i A_h E*_j = 0 <=> p^h_ij = 0", h, i, j);
        if (h == 1 && std::abs(i - j) > 1 && !zero) note("E*_i A E*_j = 0 for |i-j| > 1", h, i, j);
        if (i == j && h > 2 * i && !zero) note("E*_i A_h E*_i = 0 for h > 2i", h, i, j);

        const Mat<S>& ei = bm.E[static_cast<std::size_t>(i)];
        const Mat<S>& ej = bm.E[static_cast<std::size_t>(j)];
        const Vec<S>& dh = as[static_cast<std::size_t>(h)];
        S norm2(0);
        for (Index y = 0; y < n; ++y) {
          for (Index z = 0; z < n; ++z) {
            if constexpr (is_exact_v<S>) {
              if (ei(y, z).is_zero() || ej(y, z).is_zero()) continue;
            }
            norm2 += ei(y, z) * ej(y, z) * dh[y] * dh[z];
          }
        }
        const double mag = ScalarTraits<S>::magnitude(norm2);
        const bool dual_zero = is_exact_v<S> ? norm2 == S(0) : mag <= ctx.residual_bound * static_cast<double>(n);
        const bool q_zero = !krein_nonzero(bm.krein, bm.krein[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)]
                                                               [static_cast<std::size_t>(j)]);
        ++rep.checked;
        if (dual_zero != q_zero) note("E_i A*_h E_j = 0 <=> q^h_ij = 0", h, i, j);
        if (h == 1 && std::abs(i - j) > 1 && !dual_zero) note("E_i A* E_j = 0 for |i-j| > 1", h, i, j);
      }
    }
  }
  return rep;
}

#define QDRG_INSTANTIATE(S)                                                                         \
  template DualData<S> build_dual<S>(const Graph&, const BoseMesnerData<S>&, Index, const ToleranceContext&); \
  template TripleReport verify_triple_products<S>(const IntersectionData&, const BoseMesnerData<S>&,         \
                                                  const DualData<S>&, const ToleranceContext&);

QDRG_INSTANTIATE(Exact)
QDRG_INSTANTIATE(double)

#undef QDRG_INSTANTIATE

}  // namespace qdrg
