#include "qdrg/bose_mesner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qdrg {

namespace {

template <class S>
void require(double res, double bound, const std::string& what, const std::string& anchor) {
  const bool ok = is_exact_v<S> ? res == 0.0 : res <= bound;
  if (!ok) throw VerificationError(what + " fails (residual " + ScalarTraits<double>::to_string(res) + ")", anchor, res);
}

template <class S>
Mat<S> hadamard(const Mat<S>& a, const Mat<S>& b) {
  if constexpr (is_exact_v<S>) {
    return a.binaryExpr(b, [](const S& x, const S& y) { return x.is_zero() || y.is_zero() ? S(0) : x * y; });
  } else {
    return a.cwiseProduct(b);
  }
}

template <class S>
S trace(const Mat<S>& m) {
  S t(0);
  for (Index i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

}  // namespace

bool has_exact_spectrum(const Graph& g) {
  return quadratic_spectrum(from_integers<Exact>(g.adjacency())).has_value();
}

template <class S>
BoseMesnerData<S> build_bose_mesner(const Graph& g, const IntersectionData& data, const ToleranceContext& ctx) {
  BoseMesnerData<S> bm;
  bm.diameter = data.diameter;
  bm.order = g.order();
  bm.A = distance_matrices<S>(g);
  const int d = bm.diameter;
  const Index n = bm.order;
  const Mat<S>& a = bm.A[1];
  const Mat<S> id = Mat<S>::Identity(n, n);

  if constexpr (is_exact_v<S>) {
    const auto spec = quadratic_spectrum(from_integers<Exact>(g.adjacency()));
    if (!spec) throw UsageError(g.name() + ": spectrum is not exact; use the float domain", "spectrum");
    if (static_cast<int>(spec->size()) != d + 1) {
      throw VerificationError(g.name() + ": expected D+1 distinct eigenvalues", "D+1 eigenvalues");
    }
    bm.theta = *spec;
    std::vector<Mat<S>> powers{id};
    for (int t = 1; t <= d; ++t) powers.push_back(multiply<S>(powers.back(), a));
    for (int i = 0; i <= d; ++i) {
      // coefficients of prod_{j != i} (x - theta_j) / (theta_i - theta_j), low to high
      std::vector<S> poly{S(1)};
      for (int j = 0; j <= d; ++j) {
        if (j == i) continue;
        const S den = bm.theta[static_cast<std::size_t>(i)] - bm.theta[static_cast<std::size_t>(j)];
        std::vector<S> next(poly.size() + 1, S(0));
        for (std::size_t t = 0; t < poly.size(); ++t) {
          next[t + 1] += poly[t] / den;
          next[t] -= poly[t] * bm.theta[static_cast<std::size_t>(j)] / den;
        }
        poly = std::move(next);
      }
      Mat<S> e = Mat<S>::Zero(n, n);
      for (std::size_t t = 0; t < poly.size(); ++t) {
        if (!poly[t].is_zero()) e += poly[t] * powers[t];
      }
      bm.E.push_back(std::move(e));
    }
  } else {
    const auto spaces = symmetric_eigendecomposition(a, ctx);
    if (static_cast<int>(spaces.size()) != d + 1) {
      throw VerificationError(g.name() + ": expected D+1 distinct eigenvalues", "D+1 eigenvalues");
    }
    for (const auto& sp : spaces) {
      bm.theta.push_back(sp.value);
      bm.E.push_back(sp.space.vectors * sp.space.vectors.transpose());
    }
  }

  for (const auto& e : bm.E) {
    const S tr = trace(e);
    if constexpr (is_exact_v<S>) {
      if (!tr.is_rational() || !tr.rational_part().is_integer()) {
        throw VerificationError(g.name() + ": idempotent has non-integral trace", "m_i = rank E_i");
      }
      bm.multiplicity.push_back(static_cast<Index>(tr.rational_part().small_num()));
    } else {
      const double r = std::round(tr);
      require<S>(std::abs(tr - r), ctx.residual_bound * n, "integral multiplicity", "m_i = rank E_i");
      bm.multiplicity.push_back(static_cast<Index>(r));
    }
  }

  // Structural identities.
  const double bound = ctx.residual_bound;
  require<S>(ScalarTraits<S>::magnitude(bm.theta[0] - S(data.k)), bound, "theta_0 = k", "theta_0 = k");
  Mat<S> sum = Mat<S>::Zero(n, n);
  Mat<S> recon = Mat<S>::Zero(n, n);
  for (int i = 0; i <= d; ++i) {
    sum += bm.E[static_cast<std::size_t>(i)];
    recon += bm.theta[static_cast<std::size_t>(i)] * bm.E[static_cast<std::size_t>(i)];
  }
  require<S>(residual<S>(sum, id), bound, "sum E_i = I", "I = sum E_i");
  require<S>(residual<S>(recon, a), bound, "A = sum theta_i E_i", "A = sum theta_i E_i");
  for (int i = 0; i <= d; ++i) {
    for (int j = i; j <= d; ++j) {
      const Mat<S> p = multiply<S>(bm.E[static_cast<std::size_t>(i)], bm.E[static_cast<std::size_t>(j)]);
      const Mat<S> want = i == j ? bm.E[static_cast<std::size_t>(i)] : Mat<S>::Zero(n, n);
      require<S>(residual<S>(p, want), bound, "E_i E_j = delta_ij E_i", "E_i E_j = delta_ij E_i");
    }
  }
  const Mat<S> e0 = Mat<S>::Constant(n, n, S(1) / S(static_cast<long>(n)));
  require<S>(residual<S>(bm.E[0], e0), bound, "E_0 = |X|^-1 J", "E_0 = |X|^-1 J");

  bm.krein = krein_parameters(bm, ctx);
  for (int h = 0; h <= d; ++h) {
    for (int i = 0; i <= d; ++i) {
      for (int j = 0; j <= d; ++j) {
        const S& q = bm.krein[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        const S& qt = bm.krein[static_cast<std::size_t>(h)][static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        require<S>(ScalarTraits<S>::magnitude(q - qt), bound, "q^h_ij = q^h_ji", "q^h_ij = q^h_ji");
        const double qd = ScalarTraits<S>::to_double(q);
        if constexpr (is_exact_v<S>) {
          if (q.sign() < 0) throw VerificationError("negative Krein parameter", "Krein nonnegative", qd);
        } else {
          if (qd < -bound) throw VerificationError("negative Krein parameter", "Krein nonnegative", qd);
        }
      }
    }
  }
  bm.orderings = find_q_polynomial_orderings(bm.krein);
  bm.applied.resize(static_cast<std::size_t>(d + 1));
  std::iota(bm.applied.begin(), bm.applied.end(), 0);
  return bm;
}

template <class S>
KreinTable<S> krein_parameters(const BoseMesnerData<S>& bm, const ToleranceContext& ctx) {
  const int d = bm.diameter;
  const auto sz = static_cast<std::size_t>(d + 1);
  const S nx(static_cast<long>(bm.order));
  KreinTable<S> q(sz, std::vector<std::vector<S>>(sz, std::vector<S>(sz, S(0))));
  double scale = 1.0;
  for (std::size_t i = 0; i < sz; ++i) {
    for (std::size_t j = i; j < sz; ++j) {
      const Mat<S> prod = nx * hadamard<S>(bm.E[i], bm.E[j]);
      Mat<S> expansion = Mat<S>::Zero(bm.order, bm.order);
      for (std::size_t h = 0; h < sz; ++h) {
        // E_h are trace-orthogonal with <E_h, E_h> = m_h
        const S c = trace_inner<S>(prod, bm.E[h]) / S(static_cast<long>(bm.multiplicity[h]));
        q[h][i][j] = q[h][j][i] = c;
        scale = std::max(scale, ScalarTraits<S>::magnitude(c));
        expansion += c * bm.E[h];
      }
      require<S>(residual<S>(prod, expansion), ctx.residual_bound * scale,
                 "|X| E_i o E_j = sum q^h_ij E_h", "|X| E_i o E_j = sum q^h_ij E_h");
    }
  }
  return q;
}

template <class S>
bool krein_nonzero(const KreinTable<S>& q, const S& value) {
  if constexpr (is_exact_v<S>) {
    (void)q;
    return !value.is_zero();
  } else {
    double top = 0.0;
    for (const auto& a : q)
      for (const auto& b : a)
        for (double v : b) top = std::max(top, std::abs(v));
    return std::abs(value) > 1e-8 * top;
  }
}

template <class S>
bool is_q_polynomial_ordering(const KreinTable<S>& q, const std::vector<int>& sigma) {
  const int d = static_cast<int>(q.size()) - 1;
  if (static_cast<int>(sigma.size()) != d + 1 || sigma[0] != 0) return false;
  for (int h = 0; h <= d; ++h) {
    for (int i = 0; i <= d; ++i) {
      for (int j = 0; j <= d; ++j) {
        const bool nz = krein_nonzero(q, q[static_cast<std::size_t>(sigma[static_cast<std::size_t>(h)])]
                                          [static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])]
                                          [static_cast<std::size_t>(sigma[static_cast<std::size_t>(j)])]);
        const bool exceeds = h > i + j || i > h + j || j > h + i;
        const bool equals = h == i + j || i == h + j || j == h + i;
        if (exceeds && nz) return false;
        if (equals && !nz) return false;
      }
    }
  }
  return true;
}

template <class S>
std::vector<std::vector<int>> find_q_polynomial_orderings(const KreinTable<S>& q) {
  const int d = static_cast<int>(q.size()) - 1;
  std::vector<std::vector<int>> out;
  if (d < 1) return out;
  for (int e = 1; e <= d; ++e) {
    std::vector<int> sigma{0, e};
    std::vector<bool> used(static_cast<std::size_t>(d + 1), false);
    used[0] = used[static_cast<std::size_t>(e)] = true;
    bool ok = true;
    for (int j = 1; j < d && ok; ++j) {
      int next = -1;
      int found = 0;
      for (int h = 0; h <= d; ++h) {
        if (used[static_cast<std::size_t>(h)]) continue;
        if (krein_nonzero(q, q[static_cast<std::size_t>(h)][static_cast<std::size_t>(e)]
                              [static_cast<std::size_t>(sigma[static_cast<std::size_t>(j)])])) {
          next = h;
          ++found;
        }
      }
      if (found != 1) {
        ok = false;
        break;
      }
      sigma.push_back(next);
      used[static_cast<std::size_t>(next)] = true;
    }
    if (ok && is_q_polynomial_ordering(q, sigma)) out.push_back(sigma);
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <class S>
BoseMesnerData<S> apply_ordering(const BoseMesnerData<S>& bm, const std::vector<int>& sigma) {
  const auto sz = static_cast<std::size_t>(bm.diameter + 1);
  if (sigma.size() != sz || sigma[0] != 0) throw UsageError("ordering must be a permutation of 0..D fixing 0");
  std::vector<int> sorted = sigma;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sz; ++i) {
    if (sorted[i] != static_cast<int>(i)) throw UsageError("ordering must be a permutation of 0..D fixing 0");
  }
  BoseMesnerData<S> out = bm;
  for (std::size_t i = 0; i < sz; ++i) {
    const auto s = static_cast<std::size_t>(sigma[i]);
    out.E[i] = bm.E[s];
    out.theta[i] = bm.theta[s];
    out.multiplicity[i] = bm.multiplicity[s];
    out.applied[i] = bm.applied[s];
    for (std::size_t j = 0; j < sz; ++j) {
      for (std::size_t h = 0; h < sz; ++h) {
        out.krein[h][i][j] = bm.krein[static_cast<std::size_t>(sigma[h])][s][static_cast<std::size_t>(sigma[j])];
      }
    }
  }
  out.orderings = find_q_polynomial_orderings(out.krein);
  return out;
}

#define QDRG_INSTANTIATE(S)                                                                                   \
  template BoseMesnerData<S> build_bose_mesner<S>(const Graph&, const IntersectionData&, const ToleranceContext&); \
  template KreinTable<S> krein_parameters<S>(const BoseMesnerData<S>&, const ToleranceContext&);              \
  template bool krein_nonzero<S>(const KreinTable<S>&, const S&);                                             \
  template std::vector<std::vector<int>> find_q_polynomial_orderings<S>(const KreinTable<S>&);                \
  template bool is_q_polynomial_ordering<S>(const KreinTable<S>&, const std::vector<int>&);                   \
  template BoseMesnerData<S> apply_ordering<S>(const BoseMesnerData<S>&, const std::vector<int>&);

QDRG_INSTANTIATE(Exact)
QDRG_INSTANTIATE(double)

#undef QDRG_INSTANTIATE

}  // namespace qdrg
