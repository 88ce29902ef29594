#include "qdrg/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace qdrg {

std::vector<long> SchemeVerdict::relation_sizes() const {
  std::vector<long> out;
  for (const auto& r : relations) out.push_back(r.rows() > 0 ? r.row(0).sum() : 0);
  return out;
}

template <class S>
RestrictedAlgebra<S> restrict_corner(const CornerAlgebra<S>& c, const std::vector<Index>& cell) {
  const Mat<S>& p = c.projector;
  std::vector<char> in(static_cast<std::size_t>(p.rows()), 0);
  for (Index v : cell) {
    if (v < 0 || v >= p.rows()) throw UsageError("restrict_corner: cell vertex out of range");
    in[static_cast<std::size_t>(v)] = 1;
  }
  for (Index i = 0; i < p.rows(); ++i) {
    for (Index j = 0; j < p.cols(); ++j) {
      const S want = (i == j && in[static_cast<std::size_t>(i)]) ? S(1) : S(0);
      if (!ScalarTraits<S>::is_zero(p(i, j) - want, 1e-12)) {
        throw UsageError("restrict_corner: projector is not the indicator of the cell");
      }
    }
  }
  RestrictedAlgebra<S> out;
  out.cell = cell;
  const auto k = static_cast<Index>(cell.size());
  for (const auto& b : c.basis) {
    Mat<S> m(k, k);
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < k; ++j) m(i, j) = b(cell[static_cast<std::size_t>(i)], cell[static_cast<std::size_t>(j)]);
    }
    out.basis.push_back(std::move(m));
  }
  out.unit = Mat<S>::Identity(k, k);
  return out;
}

namespace {

template <class S>
std::string fingerprint_entry(const S& x) {
  if constexpr (is_exact_v<S>) {
    return x.to_json_string();
  } else {
    // 9 decimal places.
    return std::to_string(std::llround(x * 1e9));
  }
}

PTable structure_constants(const std::vector<Relation>& rel, std::string& failure) {
  const std::size_t m = rel.size();
  const Index n = m > 0 ? rel[0].rows() : 0;
  Eigen::MatrixXi label = Eigen::MatrixXi::Constant(n, n, -1);
  for (std::size_t h = 0; h < m; ++h) {
    for (Index y = 0; y < n; ++y) {
      for (Index z = 0; z < n; ++z) {
        if (rel[h](y, z)) label(y, z) = static_cast<int>(h);
      }
    }
  }
  PTable p(m, std::vector<std::vector<long>>(m, std::vector<long>(m, 0)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const Eigen::MatrixXi prod = rel[i] * rel[j];
      std::vector<char> seen(m, 0);
      for (Index y = 0; y < n; ++y) {
        for (Index z = 0; z < n; ++z) {
          const auto h = static_cast<std::size_t>(label(y, z));
          if (!seen[h]) {
            seen[h] = 1;
            p[h][i][j] = prod(y, z);
          } else if (p[h][i][j] != prod(y, z)) {
            failure = "R_i R_j is not constant on R_h";
            return p;
          }
        }
      }
    }
  }
  return p;
}

}  // namespace

template <class S>
SchemeVerdict detect_scheme(const RestrictedAlgebra<S>& ra, const ToleranceContext& ctx) {
  SchemeVerdict v;
  const auto n = static_cast<Index>(ra.cell.size());
  if (n == 0) {
    v.failure = "empty cell";
    return v;
  }
  // Parts in order of first appearance, row-major.
  std::map<std::string, int> part_of;
  Eigen::MatrixXi label(n, n);
  std::vector<int> count;
  for (Index y = 0; y < n; ++y) {
    for (Index z = 0; z < n; ++z) {
      std::string key;
      for (const auto& b : ra.basis) key += fingerprint_entry(b(y, z)) + '|';
      auto [it, fresh] = part_of.emplace(key, static_cast<int>(count.size()));
      if (fresh) count.push_back(0);
      ++count[static_cast<std::size_t>(it->second)];
      label(y, z) = it->second;
    }
  }
  const int parts = static_cast<int>(count.size());
  // Identity part: the label of (0,0) must cover exactly the diagonal.
  const int id = label(0, 0);
  bool identity = count[static_cast<std::size_t>(id)] == n;
  for (Index y = 0; y < n && identity; ++y) identity = label(y, y) == id;
  if (!identity) {
    v.failure = "no part equals the identity relation";
    return v;
  }
  std::vector<int> order{id};
  for (int c = 0; c < parts; ++c) {
    if (c != id) order.push_back(c);
  }
  for (int c : order) v.relations.push_back((label.array() == c).cast<int>().matrix());

  SpanTracker<S> span(n * n, ctx);
  for (const auto& b : ra.basis) span.insert(vectorize(b));
  for (const auto& r : v.relations) {
    if (r != r.transpose()) {
      v.failure = "relation not symmetric";
      return v;
    }
    const Mat<S> rs = r.unaryExpr([](int x) { return S(x); });
    const double res = span.residual_norm(vectorize(rs));
    if (is_exact_v<S> ? res != 0.0 : res > ctx.residual_bound * std::max(1.0, max_abs<S>(rs) * static_cast<double>(n))) {
      v.failure = "relation not in the span of the algebra";
      return v;
    }
  }
  if (static_cast<Index>(v.relations.size()) != span.size()) {
    v.failure = "relations span a proper subspace of the algebra";
    return v;
  }
  v.p = structure_constants(v.relations, v.failure);
  v.is_scheme = v.failure.empty();
  return v;
}

SchemeVerdict distance_scheme(const Graph& g) {
  if (!g.connected()) throw UsageError("distance_scheme: graph is disconnected");
  SchemeVerdict v;
  for (int i = 0; i <= g.diameter(); ++i) v.relations.push_back((g.distances().array() == i).cast<int>().matrix());
  v.p = structure_constants(v.relations, v.failure);
  v.is_scheme = v.failure.empty();
  return v;
}

bool same_parameters(const SchemeVerdict& a, const SchemeVerdict& b) {
  if (!a.is_scheme || !b.is_scheme || a.classes() != b.classes()) return false;
  const int m = a.classes();
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int h = 0; h < m && ok; ++h) {
      for (int i = 0; i < m && ok; ++i) {
        for (int j = 0; j < m && ok; ++j) {
          ok = a.p[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
               b.p[static_cast<std::size_t>(perm[static_cast<std::size_t>(h)])]
                  [static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]
                  [static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
        }
      }
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return false;
}

bool match_named_scheme(const SchemeVerdict& verdict, const GraphSpec& expected) {
  if (!verdict.is_scheme) return false;
  return same_parameters(verdict, distance_scheme(build_graph(expected)));
}

std::optional<GraphSpec> last_subconstituent_model(const GraphSpec& spec) {
  GraphSpec out;
  out.family = spec.family;
  switch (spec.family) {
    case Family::hamming: {
      const long d = spec.params[0], n = spec.params[1];
      if (n - 1 < 2) return std::nullopt;
      out.params = {d, n - 1};
      return out;
    }
    case Family::johnson: {
      const long n = spec.params[0], d = spec.params[1];
      const long e = std::min(d, n - 2 * d);
      if (e < 1) return std::nullopt;
      out.params = {n - d, e};
      return out;
    }
    default:
      return std::nullopt;
  }
}

#define QDRG_INSTANTIATE(S)                                                                                 \
  template RestrictedAlgebra<S> restrict_corner<S>(const CornerAlgebra<S>&, const std::vector<Index>&);     \
  template SchemeVerdict detect_scheme<S>(const RestrictedAlgebra<S>&, const ToleranceContext&);

QDRG_INSTANTIATE(Exact)
QDRG_INSTANTIATE(double)

#undef QDRG_INSTANTIATE

}  // namespace qdrg
