#include "qdrg/terwilliger.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace qdrg {

namespace {

template <class S>
bool within(double res, double bound) {
  return is_exact_v<S> ? res == 0.0 : res <= bound;
}

template <class S>
bool is_diagonal(const Mat<S>& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i != j && !ScalarTraits<S>::is_zero(m(i, j), 0.0)) return false;
    }
  }
  return true;
}

// Residual of v against the span, relative to |v| on the float path.
template <class S>
double span_residual(const SpanTracker<S>& span, const Vec<S>& v) {
  const double r = span.residual_norm(v);
  if constexpr (is_exact_v<S>) {
    return r;
  } else {
    return r / std::max(1.0, v.norm());
  }
}

template <class S>
Mat<S> submatrix(const Mat<S>& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Mat<S> out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
  }
  return out;
}

template <class S>
Mat<S> embed(const Mat<S>& block, const std::vector<Index>& rows, const std::vector<Index>& cols, Index n) {
  Mat<S> out = Mat<S>::Zero(n, n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(rows[i], cols[j]) = block(static_cast<Index>(i), static_cast<Index>(j));
  }
  return out;
}

template <class S>
Mat<S> triple(const Mat<S>& a, const Mat<S>& b, const Mat<S>& c) {
  return multiply<S>(multiply<S>(a, b), c);
}

}  // namespace

// ---------------------------------------------------------------------------
// Generic closure

template <class S>
MatrixAlgebra<S> generate_algebra(const std::vector<Mat<S>>& generators, const ToleranceContext& ctx,
                                  const GenerateOptions& opt, const Mat<S>* unit) {
  if (generators.empty() && unit == nullptr) throw UsageError("generate_algebra: no generators and no unit");
  const Index n = unit ? unit->rows() : generators.front().rows();
  for (const auto& g : generators) {
    if (g.rows() != n || g.cols() != n) throw UsageError("generate_algebra: generators must be square of equal size");
  }
  MatrixAlgebra<S> alg;
  alg.ambient = n;
  alg.generators = generators;
  alg.unit = unit ? *unit : Mat<S>::Identity(n, n);
  alg.provenance = opt.provenance;

  SpanTracker<S> span(n * n, ctx);
  auto add = [&](const Mat<S>& m) {
    if (!span.insert(vectorize(m))) return;
    if constexpr (is_exact_v<S>) {
      alg.basis.push_back(m);
    } else {
      alg.basis.push_back(unvectorize<S>(span.rows().back(), n, n));
    }
    if (alg.dim() > opt.cap) {
      throw GuardError("algebra dimension exceeds cap " + std::to_string(opt.cap) + "; try a smaller graph", "closure cap");
    }
  };
  add(alg.unit);
  for (const auto& g : generators) add(g);
  for (std::size_t q = 0; q < alg.basis.size(); ++q) {
    for (const auto& g : generators) add(multiply<S>(g, alg.basis[q]));
  }

  auto& cert = alg.certificate;
  cert.closed = true;
  for (const auto& g : generators) {
    for (const auto& b : alg.basis) {
      const double r = span_residual(span, vectorize(Mat<S>(multiply<S>(g, b))));
      cert.max_residual = std::max(cert.max_residual, r);
      ++cert.products_checked;
    }
  }
  cert.closed = within<S>(cert.max_residual, ctx.residual_bound);
  double tr = 0.0;
  for (const auto& b : alg.basis) tr = std::max(tr, span_residual(span, vectorize(Mat<S>(b.transpose()))));
  cert.transpose_closed = within<S>(tr, ctx.residual_bound);
  cert.max_residual = std::max(cert.max_residual, tr);
  cert.contains_unit = within<S>(span_residual(span, vectorize(alg.unit)), ctx.residual_bound);
  return alg;
}

template <class S>
double pairwise_closure_residual(const MatrixAlgebra<S>& alg, const ToleranceContext& ctx) {
  const Index n = alg.ambient;
  SpanTracker<S> span(n * n, ctx);
  for (const auto& b : alg.basis) span.insert(vectorize(b));
  double worst = 0.0;
  for (const auto& x : alg.basis) {
    for (const auto& y : alg.basis) worst = std::max(worst, span_residual(span, vectorize(Mat<S>(multiply<S>(x, y)))));
  }
  if constexpr (is_exact_v<S>) {
    if (worst != 0.0) return std::numeric_limits<double>::infinity();
  }
  return worst;
}

// ---------------------------------------------------------------------------
// T(x) by blocks

template <class S>
MatrixAlgebra<S> terwilliger_algebra(const Graph& g, const BoseMesnerData<S>& bm, const DualData<S>& dual,
                                     const ToleranceContext& ctx, Index cap) {
  const int d = bm.diameter;
  const Index n = bm.order;
  const auto sz = static_cast<std::size_t>(d + 1);
  std::vector<std::vector<Index>> cells;
  for (int i = 0; i <= d; ++i) cells.push_back(g.sphere(dual.base, i));

  // E*_i A E*_l blocks, nonzero only for |i - l| <= 1.
  std::vector<std::vector<Mat<S>>> ablock(sz, std::vector<Mat<S>>(sz));
  for (std::size_t i = 0; i < sz; ++i) {
    for (std::size_t l = 0; l < sz; ++l) ablock[i][l] = submatrix<S>(bm.A[1], cells[i], cells[l]);
  }

  struct Block {
    SpanTracker<S> span;
    std::vector<Mat<S>> basis;
  };
  std::vector<std::vector<Block>> blocks;
  for (std::size_t i = 0; i < sz; ++i) {
    blocks.emplace_back();
    for (std::size_t j = 0; j < sz; ++j) {
      const auto dim = static_cast<Index>(cells[i].size() * cells[j].size());
      blocks[i].push_back(Block{SpanTracker<S>(dim, ctx), {}});
    }
  }
  Index total = 0;
  std::deque<std::pair<std::size_t, std::size_t>> queue;  // (l, j) of the newest element
  auto add = [&](std::size_t i, std::size_t j, const Mat<S>& m) {
    Block& b = blocks[i][j];
    if (!b.span.insert(vectorize(m))) return;
    if constexpr (is_exact_v<S>) {
      b.basis.push_back(m);
    } else {
      b.basis.push_back(unvectorize<S>(b.span.rows().back(), m.rows(), m.cols()));
    }
    queue.emplace_back(i, j);
    if (++total > cap) {
      throw GuardError("dim T exceeds cap " + std::to_string(cap) + "; try a smaller graph", "closure cap");
    }
  };
  for (std::size_t j = 0; j < sz; ++j) {
    const auto k = static_cast<Index>(cells[j].size());
    add(j, j, Mat<S>::Identity(k, k));
  }
  std::vector<std::vector<std::size_t>> done(sz, std::vector<std::size_t>(sz, 0));
  while (!queue.empty()) {
    const auto [l, j] = queue.front();
    queue.pop_front();
    const std::size_t idx = done[l][j]++;
    const Mat<S> b = blocks[l][j].basis[idx];
    for (std::size_t i = l == 0 ? 0 : l - 1; i <= std::min(l + 1, sz - 1); ++i) add(i, j, multiply<S>(ablock[i][l], b));
  }

  MatrixAlgebra<S> alg;
  alg.ambient = n;
  alg.unit = Mat<S>::Identity(n, n);
  alg.provenance = "T(x) = <A, E*_0..E*_D>, block closure";
  alg.generators.push_back(bm.A[1]);
  for (const auto& e : dual.Estar) alg.generators.push_back(e);

  auto& cert = alg.certificate;
  double prod = 0.0, tr = 0.0;
  for (std::size_t l = 0; l < sz; ++l) {
    for (std::size_t j = 0; j < sz; ++j) {
      for (const auto& b : blocks[l][j].basis) {
        for (std::size_t i = l == 0 ? 0 : l - 1; i <= std::min(l + 1, sz - 1); ++i) {
          prod = std::max(prod, span_residual(blocks[i][j].span, vectorize(Mat<S>(multiply<S>(ablock[i][l], b)))));
          ++cert.products_checked;
        }
        tr = std::max(tr, span_residual(blocks[j][l].span, vectorize(Mat<S>(b.transpose()))));
      }
    }
  }
  cert.closed = within<S>(prod, ctx.residual_bound);
  cert.transpose_closed = within<S>(tr, ctx.residual_bound);
  cert.contains_unit = true;
  for (std::size_t j = 0; j < sz; ++j) {
    const auto k = static_cast<Index>(cells[j].size());
    cert.contains_unit =
        cert.contains_unit && within<S>(span_residual(blocks[j][j].span, vectorize(Mat<S>(Mat<S>::Identity(k, k)))),
                                        ctx.residual_bound);
  }
  cert.max_residual = std::max(prod, tr);

  for (std::size_t i = 0; i < sz; ++i) {
    for (std::size_t j = 0; j < sz; ++j) {
      for (const auto& b : blocks[i][j].basis) alg.basis.push_back(embed<S>(b, cells[i], cells[j], n));
    }
  }
  return alg;
}

// ---------------------------------------------------------------------------
// Corners

template <class S>
CornerAlgebra<S> corner(const MatrixAlgebra<S>& t, const Mat<S>& p, const std::string& name,
                        const ToleranceContext& ctx) {
  if (p.rows() != t.ambient || p.cols() != t.ambient) throw UsageError("corner: projector has the wrong size");
  if (!within<S>(residual<S>(multiply<S>(p, p), p), ctx.residual_bound)) {
    throw UsageError("corner: projector is not idempotent");
  }
  CornerAlgebra<S> out;
  out.projector = p;
  out.name = name;
  std::vector<Mat<S>> images;
  if (is_diagonal(p)) {
    const Vec<S> dg = p.diagonal();
    for (const auto& b : t.basis) {
      Mat<S> m = b;
      for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
          if constexpr (is_exact_v<S>) {
            if (m(i, j).is_zero()) continue;
          }
          m(i, j) = m(i, j) * dg[i] * dg[j];
        }
      }
      if (!is_zero_matrix<S>(m, 0.0)) images.push_back(std::move(m));
    }
  } else {
    // Scaling P by a constant does not change spans; on the exact path it lets
    // the products run on integers.
    Mat<S> pc = p;
    if constexpr (is_exact_v<S>) pc = clear_denominators(p);
    for (const auto& b : t.basis) images.push_back(triple<S>(pc, b, pc));
  }
  out.basis = gram_trace_basis<S>(images, ctx);
  return out;
}

template <class S>
double commutator_residual(const std::vector<Mat<S>>& basis) {
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      worst = std::max(worst, residual<S>(multiply<S>(basis[i], basis[j]), multiply<S>(basis[j], basis[i])));
    }
  }
  return worst;
}

template <class S>
double symmetry_residual(const std::vector<Mat<S>>& basis) {
  double worst = 0.0;
  for (const auto& b : basis) worst = std::max(worst, residual<S>(b, Mat<S>(b.transpose())));
  return worst;
}

template <class S>
bool check_commutative(const std::vector<Mat<S>>& basis, const ToleranceContext& ctx) {
  return within<S>(commutator_residual(basis), ctx.residual_bound);
}

template <class S>
bool check_all_symmetric(const std::vector<Mat<S>>& basis, const ToleranceContext& ctx) {
  return within<S>(symmetry_residual(basis), ctx.residual_bound);
}

template <class S>
std::vector<CornerAlgebra<S>> corner_algebras(const MatrixAlgebra<S>& t, const BoseMesnerData<S>& bm,
                                                       const DualData<S>& dual, const ToleranceContext& ctx) {
  const auto d = static_cast<std::size_t>(bm.diameter);
  return {corner(t, dual.Estar[1], "E*_1 T E*_1", ctx), corner(t, bm.E[1], "E_1 T E_1", ctx),
          corner(t, dual.Estar[d], "E*_D T E*_D", ctx), corner(t, bm.E[d], "E_D T E_D", ctx)};
}

template <class S>
CornerSuite check_corners(const std::vector<CornerAlgebra<S>>& corners, const ToleranceContext& ctx) {
  CornerSuite out;
  for (const auto& c : corners) {
    out.names.push_back(c.name);
    out.dims.push_back(c.dim());
    out.commutator.push_back(commutator_residual(c.basis));
    out.asymmetry.push_back(symmetry_residual(c.basis));
    out.commutative = out.commutative && within<S>(out.commutator.back(), ctx.residual_bound);
    out.symmetric = out.symmetric && within<S>(out.asymmetry.back(), ctx.residual_bound);
  }
  return out;
}

template <class S>
std::vector<DimensionCheck> verify_corner_generation(const std::vector<CornerAlgebra<S>>& corners,
                                                     const BoseMesnerData<S>& bm, const DualData<S>& dual,
                                                     const ToleranceContext& ctx) {
  if (corners.size() != 4) throw UsageError("verify_corner_generation: expected the four corners");
  const int d = bm.diameter;
  const Index n = bm.order;
  const Mat<S> jm = Mat<S>::Constant(n, n, S(1));
  const Mat<S>& e1s = dual.Estar[1];
  const Mat<S>& eds = dual.Estar[static_cast<std::size_t>(d)];
  const Mat<S>& e1 = bm.E[1];
  const Mat<S>& ed = bm.E[static_cast<std::size_t>(d)];
  const Mat<S>& a = bm.A[1];
  const Mat<S>& as = dual.Astar1();
  std::vector<DimensionCheck> out;

  {
    const std::vector<Mat<S>> gens{triple<S>(e1s, jm, e1s), triple<S>(e1s, a, e1s)};
    out.push_back({"E1*TE1*-generation", "dim E*_1 T E*_1 = dim <E*_1 J E*_1, E*_1 A E*_1>", corners[0].dim(),
                   generate_algebra<S>(gens, ctx, {}, &e1s).dim()});
    std::vector<Mat<S>> three{e1s, gens[0], gens[1]};
    std::vector<Mat<S>> all = three;
    for (const auto& ah : bm.A) all.push_back(triple<S>(e1s, ah, e1s));
    out.push_back({"E1*ME1*-span", "span{E*_1, E*_1 J E*_1, E*_1 A E*_1} = E*_1 M E*_1",
                   matrix_set_rank<S>(three, ctx), matrix_set_rank<S>(all, ctx)});
  }
  {
    const std::vector<Mat<S>> gens{triple<S>(e1, dual.Estar[0], e1), triple<S>(e1, as, e1)};
    out.push_back({"E1TE1-generation", "dim E_1 T E_1 = dim <E_1 E*_0 E_1, E_1 A* E_1>", corners[1].dim(),
                   generate_algebra<S>(gens, ctx, {}, &e1).dim()});
    std::vector<Mat<S>> three{e1, gens[0], gens[1]};
    std::vector<Mat<S>> all = three;
    for (const auto& ah : dual.Astar) all.push_back(triple<S>(e1, ah, e1));
    out.push_back({"E1M*E1-span", "span{E_1, E_1 E*_0 E_1, E_1 A* E_1} = E_1 M* E_1",
                   matrix_set_rank<S>(three, ctx), matrix_set_rank<S>(all, ctx)});
  }
  {
    std::vector<Mat<S>> gens;
    for (int h = 1; h <= d; ++h) gens.push_back(triple<S>(eds, bm.A[static_cast<std::size_t>(h)], eds));
    out.push_back({"ED*TED*-generation", "dim E*_D T E*_D = dim <E*_D A_h E*_D : 1 <= h <= D>", corners[2].dim(),
                   generate_algebra<S>(gens, ctx, {}, &eds).dim()});
  }
  {
    std::vector<Mat<S>> gens;
    for (int h = 1; h <= d; ++h) gens.push_back(triple<S>(ed, dual.Astar[static_cast<std::size_t>(h)], ed));
    out.push_back({"EDTED-generation", "dim E_D T E_D = dim <E_D A*_h E_D : 1 <= h <= D>", corners[3].dim(),
                   generate_algebra<S>(gens, ctx, {}, &ed).dim()});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Identities

template <class S>
std::vector<IdentityCheck> verify_identities(const IntersectionData& data, const BoseMesnerData<S>& bm,
                                             const DualData<S>& dual, const ToleranceContext& ctx) {
  const int d = bm.diameter;
  const Index n = bm.order;
  const S nx(static_cast<long>(n));
  const S k(data.k);
  const S a1(data.a[1]);
  const S astar1 = bm.krein[1][1][1];
  const S m1(static_cast<long>(bm.multiplicity[1]));
  const Mat<S> jm = Mat<S>::Constant(n, n, S(1));
  const Mat<S>& a = bm.A[1];
  const Mat<S>& as = dual.Astar1();
  const Mat<S>& e0 = bm.E[0];
  const Mat<S>& e1 = bm.E[1];
  const Mat<S>& e0s = dual.Estar[0];
  const Mat<S>& e1s = dual.Estar[1];

  std::vector<IdentityCheck> out;
  auto check = [&](const std::string& anchor, const std::string& identity, const Mat<S>& lhs, const Mat<S>& rhs) {
    const double r = residual<S>(lhs, rhs);
    out.push_back({anchor, identity, r, within<S>(r, ctx.residual_bound * std::max(1.0, max_abs<S>(rhs)))});
  };

  Mat<S> sum_p = Mat<S>::Zero(n, n), sum_p_rev = Mat<S>::Zero(n, n);
  Mat<S> sum_q = Mat<S>::Zero(n, n), sum_q_rev = Mat<S>::Zero(n, n);
  for (int h = 0; h <= d; ++h) {
    const auto hs = static_cast<std::size_t>(h);
    const S p(data(h, 1, 1));
    const S& q = bm.krein[hs][1][1];
    sum_p += p * multiply<S>(e0, dual.Estar[hs]);
    sum_p_rev += p * multiply<S>(dual.Estar[hs], e0);
    sum_q += q * multiply<S>(e0s, bm.E[hs]);
    sum_q_rev += q * multiply<S>(bm.E[hs], e0s);
  }
  check("reduction-projector", "E_0 E*_1 E_0 = |X|^-1 k E_0", triple<S>(e0, e1s, e0), Mat<S>((k / nx) * e0));
  check("reduction-left", "E_0 E*_1 A = sum_h p^h_11 E_0 E*_h", triple<S>(e0, e1s, a), sum_p);
  check("reduction-right", "A E*_1 E_0 = sum_h p^h_11 E*_h E_0", triple<S>(a, e1s, e0), sum_p_rev);

  const Mat<S> jj = triple<S>(e1s, jm, e1s);
  const Mat<S> aa = triple<S>(e1s, a, e1s);
  check("ideal-square", "(E*_1 J E*_1)^2 = k E*_1 J E*_1", multiply<S>(jj, jj), Mat<S>(k * jj));
  check("ideal-absorb", "(E*_1 J E*_1)(E*_1 A E*_1) = a_1 E*_1 J E*_1", multiply<S>(jj, aa), Mat<S>(a1 * jj));
  check("ideal-absorb-rev", "(E*_1 A E*_1)(E*_1 J E*_1) = a_1 E*_1 J E*_1", multiply<S>(aa, jj), Mat<S>(a1 * jj));

  check("dual-reduction-projector", "E*_0 E_1 E*_0 = |X|^-1 m_1 E*_0", triple<S>(e0s, e1, e0s), Mat<S>((m1 / nx) * e0s));
  check("dual-reduction-left", "E*_0 E_1 A* = sum_h q^h_11 E*_0 E_h", triple<S>(e0s, e1, as), sum_q);
  check("dual-reduction-right", "A* E_1 E*_0 = sum_h q^h_11 E_h E*_0", triple<S>(as, e1, e0s), sum_q_rev);

  const Mat<S> ee = triple<S>(e1, e0s, e1);
  const Mat<S> ea = triple<S>(e1, as, e1);
  check("dual-ideal-square", "(E_1 E*_0 E_1)^2 = m_1 |X|^-1 E_1 E*_0 E_1", multiply<S>(ee, ee), Mat<S>((m1 / nx) * ee));
  check("dual-ideal-absorb", "(E_1 E*_0 E_1)(E_1 A* E_1) = a*_1 E_1 E*_0 E_1", multiply<S>(ee, ea),
        Mat<S>(astar1 * ee));
  check("dual-ideal-absorb-rev", "(E_1 A* E_1)(E_1 E*_0 E_1) = a*_1 E_1 E*_0 E_1", multiply<S>(ea, ee),
        Mat<S>(astar1 * ee));
  return out;
}

template <class S>
bool local_symmetry(const BoseMesnerData<S>& bm, const DualData<S>& dual, const ToleranceContext& ctx) {
  std::vector<Mat<S>> mats;
  for (std::size_t i = 0; i < bm.E.size(); ++i) {
    for (std::size_t h = 0; h < bm.A.size(); ++h) {
      mats.push_back(triple<S>(dual.Estar[i], bm.A[h], dual.Estar[i]));
      mats.push_back(triple<S>(bm.E[i], dual.Astar[h], bm.E[i]));
    }
  }
  return check_all_symmetric(mats, ctx);
}

#define QDRG_INSTANTIATE(S)                                                                                        \
  template MatrixAlgebra<S> generate_algebra<S>(const std::vector<Mat<S>>&, const ToleranceContext&,               \
                                                const GenerateOptions&, const Mat<S>*);                            \
  template double pairwise_closure_residual<S>(const MatrixAlgebra<S>&, const ToleranceContext&);                  \
  template MatrixAlgebra<S> terwilliger_algebra<S>(const Graph&, const BoseMesnerData<S>&, const DualData<S>&,     \
                                                   const ToleranceContext&, Index);                                \
  template CornerAlgebra<S> corner<S>(const MatrixAlgebra<S>&, const Mat<S>&, const std::string&,                  \
                                      const ToleranceContext&);                                                    \
  template double commutator_residual<S>(const std::vector<Mat<S>>&);                                              \
  template double symmetry_residual<S>(const std::vector<Mat<S>>&);                                                \
  template bool check_commutative<S>(const std::vector<Mat<S>>&, const ToleranceContext&);                         \
  template bool check_all_symmetric<S>(const std::vector<Mat<S>>&, const ToleranceContext&);                       \
  template std::vector<CornerAlgebra<S>> corner_algebras<S>(const MatrixAlgebra<S>&,                      \
                                                                     const BoseMesnerData<S>&, const DualData<S>&, \
                                                                     const ToleranceContext&);                     \
  template CornerSuite check_corners<S>(const std::vector<CornerAlgebra<S>>&, const ToleranceContext&);            \
  template std::vector<DimensionCheck> verify_corner_generation<S>(                                                \
      const std::vector<CornerAlgebra<S>>&, const BoseMesnerData<S>&, const DualData<S>&, const ToleranceContext&); \
  template std::vector<IdentityCheck> verify_identities<S>(const IntersectionData&, const BoseMesnerData<S>&,      \
                                                           const DualData<S>&, const ToleranceContext&);           \
  template bool local_symmetry<S>(const BoseMesnerData<S>&, const DualData<S>&, const ToleranceContext&);

QDRG_INSTANTIATE(Exact)
QDRG_INSTANTIATE(double)

#undef QDRG_INSTANTIATE

}  // namespace qdrg
