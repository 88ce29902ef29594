#include "qdrg/tmodules.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/Sparse>

namespace qdrg {

namespace {

template <class S>
bool diagonal_matrix(const Mat<S>& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i != j && !ScalarTraits<S>::is_zero(m(i, j), 0.0)) return false;
    }
  }
  return true;
}

// Orthonormal eigenvectors of a symmetric PSD matrix for eigenvalues at or
// below rank_threshold * max(1, lambda_max).
Mat<double> psd_kernel(const Mat<double>& normal, const ToleranceContext& ctx) {
  const Index u = normal.rows();
  if (u == 0) return Mat<double>(0, 0);
  Eigen::SelfAdjointEigenSolver<Mat<double>> es(normal);
  const auto& ev = es.eigenvalues();
  const double tol = ctx.rank_threshold * std::max(1.0, ev[u - 1]);
  Index k = 0;
  while (k < u && ev[k] <= tol) ++k;
  return es.eigenvectors().leftCols(k);
}

Mat<double> symmetrize(const Mat<double>& m) { return (m + m.transpose()) / 2.0; }

using Rng = std::mt19937_64;

long long draw_coefficient(Rng& rng) {
  return std::uniform_int_distribution<long long>(-1000000, 1000000)(rng);
}

Mat<double> random_symmetric(const std::vector<Mat<double>>& basis, Rng& rng, std::vector<long long>* record) {
  Mat<double> c = Mat<double>::Zero(basis.front().rows(), basis.front().cols());
  for (const auto& b : basis) {
    const long long g = draw_coefficient(rng);
    if (record) record->push_back(g);
    c += static_cast<double>(g) * symmetrize(b);
  }
  return c;
}

std::optional<Rational> rationalize(double x, long long max_den, double tol) {
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double y = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(y);
    if (std::abs(a) > 1e12) break;
    const auto ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0;
    const long long k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    if (std::abs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) return Rational(h1, k1);
    const double frac = y - a;
    if (frac < 1e-15) break;
    y = 1.0 / frac;
  }
  return std::nullopt;
}

// q has orthonormal columns, so singular values of p q lie in [0, 1] and the
// threshold is absolute.
Index image_rank(const Mat<double>& p, const Mat<double>& q, const ToleranceContext& ctx) {
  if (q.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat<double>> svd(p * q);
  const auto& sv = svd.singularValues();
  Index r = 0;
  while (r < sv.size() && sv[r] > ctx.rank_threshold * std::max(1.0, p.cwiseAbs().maxCoeff())) ++r;
  return r;
}

std::vector<Index> cell_dims(const std::vector<Mat<double>>& projectors, const Mat<double>& q,
                             const ToleranceContext& ctx) {
  std::vector<Index> out;
  for (const auto& p : projectors) out.push_back(image_rank(p, q, ctx));
  return out;
}

// (first nonzero, last nonzero, contiguous?)
std::tuple<int, int, bool> support(const std::vector<Index>& dims) {
  int first = -1, last = -1;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] == 0) continue;
    if (first < 0) first = static_cast<int>(i);
    last = static_cast<int>(i);
  }
  bool contiguous = first >= 0;
  for (int i = first; contiguous && i <= last; ++i) contiguous = dims[static_cast<std::size_t>(i)] > 0;
  return {first, last, contiguous};
}

// Unit vector spanning the one-dimensional image p Q.
Vec<double> line_vector(const Mat<double>& p, const Mat<double>& q) {
  const Mat<double> img = p * q;
  Index best = 0;
  for (Index j = 1; j < img.cols(); ++j) {
    if (img.col(j).norm() > img.col(best).norm()) best = j;
  }
  return img.col(best).normalized();
}

double eigen_residual(const Mat<double>& m, const Vec<double>& v, double value) {
  return (m * v - value * v).cwiseAbs().maxCoeff();
}

bool close(double a, double b, const ToleranceContext& ctx) {
  return std::abs(a - b) <= ctx.cluster_width * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

// ---------------------------------------------------------------------------

template <class S>
ModuleSetting module_setting(const MatrixAlgebra<S>& t, const BoseMesnerData<S>& bm, const DualData<S>& dual) {
  ModuleSetting st;
  st.order = bm.order;
  st.diameter = bm.diameter;
  st.generators.push_back(to_double(bm.A[1]));
  for (const auto& e : dual.Estar) st.generators.push_back(to_double(e));
  for (const auto& b : t.basis) st.t_basis.push_back(to_double(b));
  st.dim_t = t.dim();
  st.dim_t_exact = is_exact_v<S>;
  for (const auto& a : bm.A) st.A.push_back(to_double(a));
  for (const auto& e : bm.E) st.E.push_back(to_double(e));
  for (const auto& e : dual.Estar) st.Estar.push_back(to_double(e));
  return st;
}

template <class S>
MatrixAlgebra<S> commutant(const std::vector<Mat<S>>& generators, const ToleranceContext& ctx) {
  if (generators.empty()) throw UsageError("commutant: no generators");
  const Index n = generators.front().rows();
  std::vector<char> allowed(static_cast<std::size_t>(n * n), 1);
  std::vector<const Mat<S>*> dense;
  for (const auto& g : generators) {
    if (g.rows() != n || g.cols() != n) throw UsageError("commutant: generators must be square of equal size");
    if (!diagonal_matrix(g)) {
      dense.push_back(&g);
      continue;
    }
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        const bool same = is_exact_v<S> ? g(i, i) == g(j, j)
                                        : ScalarTraits<S>::magnitude(g(i, i) - g(j, j)) <= ctx.rank_threshold;
        if (!same) allowed[static_cast<std::size_t>(i * n + j)] = 0;
      }
    }
  }
  std::vector<Index> id(static_cast<std::size_t>(n * n), -1);
  std::vector<std::pair<Index, Index>> cells;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (!allowed[static_cast<std::size_t>(i * n + j)]) continue;
      id[static_cast<std::size_t>(i * n + j)] = static_cast<Index>(cells.size());
      cells.emplace_back(i, j);
    }
  }
  const auto u = static_cast<Index>(cells.size());
  auto uid = [&](Index i, Index j) { return id[static_cast<std::size_t>(i * n + j)]; };

  // Row (p, q) of C G - G C: sum_l C(p,l) G(l,q) - G(p,l) C(l,q).
  Mat<S> kernel;
  if constexpr (is_exact_v<S>) {
    std::vector<Vec<S>> rows;
    for (const Mat<S>* g : dense) {
      for (Index p = 0; p < n; ++p) {
        for (Index q = 0; q < n; ++q) {
          Vec<S> row = Vec<S>::Zero(u);
          bool any = false;
          for (Index l = 0; l < n; ++l) {
            if (const Index a = uid(p, l); a >= 0 && !(*g)(l, q).is_zero()) row[a] += (*g)(l, q), any = true;
            if (const Index b = uid(l, q); b >= 0 && !(*g)(p, l).is_zero()) row[b] -= (*g)(p, l), any = true;
          }
          if (any) rows.push_back(std::move(row));
        }
      }
    }
    Mat<S> m(static_cast<Index>(rows.size()), u);
    for (std::size_t r = 0; r < rows.size(); ++r) m.row(static_cast<Index>(r)) = rows[r].transpose();
    kernel = rows.empty() ? Mat<S>(Mat<S>::Identity(u, u)) : nullspace<S>(m, ctx);
  } else {
    std::vector<Eigen::Triplet<double>> trips;
    Index row = 0;
    for (const Mat<S>* g : dense) {
      for (Index p = 0; p < n; ++p) {
        for (Index q = 0; q < n; ++q, ++row) {
          for (Index l = 0; l < n; ++l) {
            if (const Index a = uid(p, l); a >= 0 && (*g)(l, q) != 0.0) trips.emplace_back(row, a, (*g)(l, q));
            if (const Index b = uid(l, q); b >= 0 && (*g)(p, l) != 0.0) trips.emplace_back(row, b, -(*g)(p, l));
          }
        }
      }
    }
    Eigen::SparseMatrix<double> m(row, u);
    m.setFromTriplets(trips.begin(), trips.end());
    const Eigen::SparseMatrix<double> normal = m.transpose() * m;
    kernel = psd_kernel(Mat<double>(normal), ctx);
  }

  MatrixAlgebra<S> alg;
  alg.ambient = n;
  alg.generators = generators;
  alg.unit = Mat<S>::Identity(n, n);
  alg.provenance = "commutant";
  for (Index k = 0; k < kernel.cols(); ++k) {
    Mat<S> c = Mat<S>::Zero(n, n);
    for (Index v = 0; v < u; ++v) c(cells[static_cast<std::size_t>(v)].first, cells[static_cast<std::size_t>(v)].second) = kernel(v, k);
    alg.basis.push_back(std::move(c));
  }

  SpanTracker<S> span(n * n, ctx);
  for (const auto& b : alg.basis) span.insert(vectorize(b));
  auto& cert = alg.certificate;
  double comm = 0.0, tr = 0.0;
  for (const auto& b : alg.basis) {
    for (const auto& g : generators) {
      comm = std::max(comm, residual<S>(multiply<S>(b, g), multiply<S>(g, b)));
      ++cert.products_checked;
    }
    tr = std::max(tr, span.residual_norm(vectorize(Mat<S>(b.transpose()))));
  }
  const double unit_res = span.residual_norm(vectorize(alg.unit));
  auto within = [&](double r) { return is_exact_v<S> ? r == 0.0 : r <= ctx.residual_bound; };
  cert.closed = within(comm);
  cert.transpose_closed = within(tr);
  cert.contains_unit = within(unit_res);
  cert.max_residual = std::max({comm, tr, unit_res});
  return alg;
}

// ---------------------------------------------------------------------------

double stability_residual(const Mat<double>& q, const ModuleSetting& st) {
  double worst = 0.0;
  for (const auto& g : st.generators) {
    const Mat<double> gq = g * q;
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if (gq.size() == 0) continue;
    worst = std::max(worst, (gq - q * (q.transpose() * gq)).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

std::vector<Mat<double>> intertwiners(const Mat<double>& q1, const Mat<double>& q2, const ModuleSetting& st,
                                      const ToleranceContext& ctx) {
  const Index w1 = q1.cols(), w2 = q2.cols();
  const Index u = w1 * w2;
  if (u == 0) return {};
  // vec is column-major: vec(X G1) = (G1^T (x) I) vec X, vec(G2 X) = (I (x) G2) vec X.
  Mat<double> normal = Mat<double>::Zero(u, u);
  for (const auto& g : st.generators) {
    const Mat<double> g1 = q1.transpose() * g * q1;
    const Mat<double> g2 = q2.transpose() * g * q2;
    Mat<double> k = Mat<double>::Zero(u, u);
    for (Index a = 0; a < w1; ++a) {
      for (Index b = 0; b < w1; ++b) {
        if (g1(b, a) != 0.0) k.block(a * w2, b * w2, w2, w2).diagonal().array() += g1(b, a);
      }
      k.block(a * w2, a * w2, w2, w2) -= g2;
    }
    normal.noalias() += k.transpose() * k;
  }
  const Mat<double> ker = psd_kernel(normal, ctx);
  std::vector<Mat<double>> out;
  for (Index j = 0; j < ker.cols(); ++j) out.push_back(Eigen::Map<const Mat<double>>(ker.col(j).data(), w2, w1));
  return out;
}

bool is_irreducible(const SubspaceBasis<double>& w, const ModuleSetting& st, const ToleranceContext& ctx) {
  const double res = stability_residual(w.vectors, st);
  if (res > ctx.residual_bound) throw VerificationError("subspace is not T-stable", "T-stable", res);
  return intertwiners(w.vectors, w.vectors, st, ctx).size() == 1;
}

TModule module_profile(const SubspaceBasis<double>& w, const ModuleSetting& st, const ToleranceContext& ctx) {
  TModule m;
  m.space = w;
  const Mat<double>& q = w.vectors;
  const int dd = st.diameter;
  const auto dstar = cell_dims(st.Estar, q, ctx);
  const auto dplain = cell_dims(st.E, q, ctx);
  const auto [r, rlast, rcont] = support(dstar);
  const auto [s, slast, scont] = support(dplain);
  std::vector<std::string> bad;
  if (r < 0 || s < 0) throw VerificationError("module profile: zero module", "W != 0", 0.0);
  if (!rcont) bad.push_back("E*_i W nonzero exactly for r <= i <= r+d");
  if (!scont) bad.push_back("E_i W nonzero exactly for s <= i <= s+d*");
  m.r = r;
  m.s = s;
  m.d = rlast - r;
  m.dual_d = slast - s;
  for (int i = r; i <= rlast; ++i) m.shape.push_back(dstar[static_cast<std::size_t>(i)]);
  for (int i = s; i <= slast; ++i) m.dual_shape.push_back(dplain[static_cast<std::size_t>(i)]);
  m.primary = r == 0;

  if (m.d != m.dual_d) bad.push_back("diameter = dual diameter");
  if (m.shape != m.dual_shape) bad.push_back("dim E*_{r+i} W = dim E_{s+i} W");
  for (int i = 0; i <= m.d; ++i) {
    if (m.shape[static_cast<std::size_t>(i)] != m.shape[static_cast<std::size_t>(m.d - i)]) {
      bad.push_back("rho_i = rho_{d-i}");
      break;
    }
  }
  for (int i = 1; i <= m.d / 2; ++i) {
    if (m.shape[static_cast<std::size_t>(i - 1)] > m.shape[static_cast<std::size_t>(i)]) {
      bad.push_back("rho_{i-1} <= rho_i");
      break;
    }
  }
  if (m.shape.front() != 1) bad.push_back("sharp: rho_0 = 1");
  const bool p1 = r == 0, p2 = s == 0, p3 = m.d == dd;
  if (p1 != p2 || p1 != p3) bad.push_back("primary: r = 0 <=> s = 0 <=> d = D");
  if (m.primary && std::any_of(m.shape.begin(), m.shape.end(), [](Index x) { return x != 1; })) {
    bad.push_back("primary: rho_i = 1");
  }

  const double kscale = std::max(1.0, st.A[1].cwiseAbs().rowwise().sum().maxCoeff());
  if (r == 1 && dstar[1] == 1) {
    const Vec<double> v = line_vector(st.Estar[1], q);
    const Mat<double> loc = st.Estar[1] * st.A[1] * st.Estar[1];
    const double mu = v.dot(loc * v);
    if (eigen_residual(loc, v, mu) > ctx.residual_bound * kscale) bad.push_back("E*_1 A E*_1 w = mu w");
    m.mu = mu;
  }
  if (r + m.d == dd && dstar[static_cast<std::size_t>(dd)] == 1) {
    const Vec<double> v = line_vector(st.Estar[static_cast<std::size_t>(dd)], q);
    std::vector<double> phi;
    for (int h = 1; h <= dd; ++h) {
      const Mat<double> loc = st.Estar[static_cast<std::size_t>(dd)] * st.A[static_cast<std::size_t>(h)] *
                              st.Estar[static_cast<std::size_t>(dd)];
      phi.push_back(v.dot(loc * v));
      if (eigen_residual(loc, v, phi.back()) > ctx.residual_bound * std::max(1.0, loc.cwiseAbs().maxCoeff() * st.order)) {
        bad.push_back("E*_D A_h E*_D w = phi_h w");
      }
    }
    m.phi = phi;
  }
  m.end_dim = static_cast<Index>(intertwiners(q, q, st, ctx).size());
  if (!bad.empty()) {
    std::string msg = "module profile violates:";
    for (const auto& b : bad) msg += " [" + b + "]";
    throw VerificationError(msg, bad.front(), 0.0);
  }
  return m;
}

bool modules_isomorphic(const TModule& w1, const TModule& w2, const ModuleSetting& st, const ToleranceContext& ctx) {
  if (w1.dim() != w2.dim()) return false;
  const auto ints = intertwiners(w1.space.vectors, w2.space.vectors, st, ctx);
  if (ints.size() != 1) return false;
  Eigen::JacobiSVD<Mat<double>> svd(ints.front());
  const auto& sv = svd.singularValues();
  return sv[sv.size() - 1] > ctx.rank_threshold * std::max(1.0, sv[0]) * 1e3;
}

std::optional<bool> mu_criterion(const TModule& w1, const TModule& w2, const ToleranceContext& ctx) {
  if (!w1.mu || !w2.mu) return std::nullopt;
  return close(*w1.mu, *w2.mu, ctx);
}

std::optional<bool> phi_criterion(const TModule& w1, const TModule& w2, const ToleranceContext& ctx) {
  if (!w1.phi || !w2.phi) return std::nullopt;
  for (std::size_t h = 0; h < w1.phi->size(); ++h) {
    if (!close((*w1.phi)[h], (*w2.phi)[h], ctx)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Decomposition

namespace {

struct Splitter {
  const ModuleSetting& st;
  const ToleranceContext& ctx;
  Rng& rng;
  std::vector<Mat<double>> out;

  bool split(const Mat<double>& q, int depth) {
    if (q.cols() == 0) return true;
    const auto ends = intertwiners(q, q, st, ctx);
    if (ends.size() == 1) {
      out.push_back(q);
      return true;
    }
    if (depth > st.order) return false;
    // A random symmetric endomorphism separates the summands.
    const Mat<double> sigma = random_symmetric(ends, rng, nullptr);
    std::vector<EigenSpace> parts;
    try {
      parts = symmetric_eigendecomposition(sigma, ctx);
    } catch (const VerificationError&) {
      parts.clear();
    }
    if (parts.size() > 1) {
      for (const auto& p : parts) {
        if (!split(Mat<double>(q * p.space.vectors), depth + 1)) return false;
      }
      return true;
    }
    // Cyclic submodule Tw.
    Vec<double> coeff(q.cols());
    for (Index i = 0; i < q.cols(); ++i) coeff[i] = static_cast<double>(draw_coefficient(rng)) / 1e6;
    const Vec<double> w = q * coeff;
    Mat<double> imgs(st.order, static_cast<Index>(st.t_basis.size()));
    for (std::size_t k = 0; k < st.t_basis.size(); ++k) imgs.col(static_cast<Index>(k)) = st.t_basis[k] * w;
    const auto tw = SubspaceBasis<double>::span_of(imgs, ctx);
    if (tw.dim() == 0 || tw.dim() >= q.cols()) return false;
    const auto rest = orthogonal_complement_within(tw, SubspaceBasis<double>{st.order, q}, ctx);
    return split(tw.vectors, depth + 1) && split(rest.vectors, depth + 1);
  }
};

using ClassKey = std::tuple<int, int, int, std::vector<Index>, std::vector<double>, int>;

}  // namespace

TModuleDecomposition decompose_standard_module(const ModuleSetting& st, const MatrixAlgebra<double>& comm,
                                               const ToleranceContext& ctx, std::uint64_t seed) {
  ctx.validate();
  if (comm.basis.empty()) throw UsageError("decompose_standard_module: empty commutant");
  Rng rng(seed);
  TModuleDecomposition dec;
  dec.seed = seed;
  dec.dim_t = st.dim_t;
  dec.dim_commutant = comm.dim();
  const int max_draws = 6;
  std::vector<Mat<double>> found;
  std::string last_failure = "no draw attempted";
  for (int draw = 0; draw < max_draws; ++draw) {
    dec.draws = draw + 1;
    dec.coefficients.clear();
    const Mat<double> c = random_symmetric(comm.basis, rng, &dec.coefficients);
    std::vector<EigenSpace> spaces;
    try {
      spaces = symmetric_eigendecomposition(c, ctx);
    } catch (const VerificationError& e) {
      last_failure = e.what();
      continue;
    }
    Splitter sp{st, ctx, rng, {}};
    bool ok = true;
    double stab = 0.0;
    for (const auto& es : spaces) {
      const double res = stability_residual(es.space.vectors, st);
      stab = std::max(stab, res);
      if (res > ctx.residual_bound) {
        ok = false;
        last_failure = "eigenspace not T-stable, residual " + std::to_string(res);
        break;
      }
      if (!sp.split(es.space.vectors, 0)) {
        ok = false;
        last_failure = "candidate could not be split into irreducibles";
        break;
      }
    }
    Index total = 0;
    for (const auto& q : sp.out) total += q.cols();
    if (ok && total != st.order) {
      ok = false;
      last_failure = "module dimensions sum to " + std::to_string(total);
    }
    if (ok) {
      found = std::move(sp.out);
      dec.max_stability = stab;
      break;
    }
  }
  if (found.empty()) {
    throw GuardError("module decomposition: retries exhausted (" + last_failure + ")", "V = sum of irreducible W");
  }

  for (std::size_t a = 0; a < found.size(); ++a) {
    dec.max_stability = std::max(dec.max_stability, stability_residual(found[a], st));
    for (std::size_t b = a + 1; b < found.size(); ++b) {
      dec.max_overlap = std::max(dec.max_overlap, (found[a].transpose() * found[b]).cwiseAbs().maxCoeff());
    }
  }
  if (dec.max_overlap > ctx.residual_bound) {
    throw VerificationError("module bases are not orthogonal", "orthogonal direct sum", dec.max_overlap);
  }

  std::vector<TModule> mods;
  for (const auto& q : found) mods.push_back(module_profile(SubspaceBasis<double>{st.order, q}, st, ctx));

  // Classes by intertwiners, compared against one representative each.
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < mods.size(); ++i) {
    for (std::size_t c = 0; c < reps.size(); ++c) {
      if (modules_isomorphic(mods[reps[c]], mods[i], st, ctx)) {
        mods[i].cls = static_cast<int>(c);
        break;
      }
    }
    if (mods[i].cls < 0) {
      mods[i].cls = static_cast<int>(reps.size());
      reps.push_back(i);
    }
    const TModule& rep = mods[reps[static_cast<std::size_t>(mods[i].cls)]];
    if (rep.r != mods[i].r || rep.s != mods[i].s || rep.shape != mods[i].shape) {
      throw VerificationError("isomorphic modules with different profiles", "isomorphism", 0.0);
    }
  }
  for (std::size_t a = 0; a < mods.size(); ++a) {
    for (std::size_t b = a + 1; b < mods.size(); ++b) {
      const auto mu = mu_criterion(mods[a], mods[b], ctx);
      const auto phi = phi_criterion(mods[a], mods[b], ctx);
      if (!mu && !phi) continue;
      const bool iso = modules_isomorphic(mods[a], mods[b], st, ctx);
      if (mu) {
        ++dec.criteria.mu_pairs;
        dec.criteria.mu_agree += *mu == iso;
      }
      if (phi) {
        ++dec.criteria.phi_pairs;
        dec.criteria.phi_agree += *phi == iso;
      }
    }
  }

  // Stable class ids.
  std::vector<ClassKey> keys;
  for (std::size_t c = 0; c < reps.size(); ++c) {
    const TModule& m = mods[reps[c]];
    std::vector<double> local;
    if (m.mu) local.push_back(*m.mu);
    if (m.phi) local.insert(local.end(), m.phi->begin(), m.phi->end());
    keys.emplace_back(m.r, m.s, m.d, m.shape, local, static_cast<int>(c));
  }
  std::vector<int> order(reps.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)]; });
  std::vector<int> rank_of(reps.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank_of[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  for (auto& m : mods) m.cls = rank_of[static_cast<std::size_t>(m.cls)];
  std::stable_sort(mods.begin(), mods.end(), [](const TModule& a, const TModule& b) { return a.cls < b.cls; });

  dec.multiplicities.assign(reps.size(), 0);
  dec.class_dims.assign(reps.size(), 0);
  for (const auto& m : mods) {
    ++dec.multiplicities[static_cast<std::size_t>(m.cls)];
    dec.class_dims[static_cast<std::size_t>(m.cls)] = m.dim();
  }
  dec.modules = std::move(mods);
  return dec;
}

template <class S>
std::optional<bool> exact_recheck(const TModule& w, const BoseMesnerData<S>& bm, const DualData<S>& dual) {
  if constexpr (!is_exact_v<S>) {
    return std::nullopt;
  } else {
    const Mat<double> pf = w.space.vectors * w.space.vectors.transpose();
    const Index n = pf.rows();
    Mat<S> p(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        const auto q = rationalize(pf(i, j), 1000000, 1e-9);
        if (!q) return std::nullopt;
        p(i, j) = S(*q);
      }
    }
    if (residual<S>(multiply<S>(p, p), p) != 0.0 || residual<S>(p, Mat<S>(p.transpose())) != 0.0) return std::nullopt;
    if (rank<S>(p) != w.dim()) return false;
    for (int i = 0; i <= w.d; ++i) {
      const auto si = static_cast<std::size_t>(i);
      if (rank<S>(multiply<S>(dual.Estar[static_cast<std::size_t>(w.r + i)], p)) != w.shape[si]) return false;
      if (rank<S>(multiply<S>(bm.E[static_cast<std::size_t>(w.s + i)], p)) != w.dual_shape[si]) return false;
    }
    // T-stability: A P = P A P and E*_i P = P E*_i P.
    if (residual<S>(multiply<S>(bm.A[1], p), multiply<S>(p, multiply<S>(bm.A[1], p))) != 0.0) return false;
    for (const auto& e : dual.Estar) {
      if (residual<S>(multiply<S>(e, p), multiply<S>(p, multiply<S>(e, p))) != 0.0) return false;
    }
    return true;
  }
}

WedderburnReport wedderburn_report(const TModuleDecomposition& dec, int diameter) {
  WedderburnReport w;
  w.summands = dec.class_dims;
  w.dim_t = dec.dim_t;
  w.dim_commutant = dec.dim_commutant;
  w.diameter = diameter;
  for (std::size_t c = 0; c < dec.class_dims.size(); ++c) {
    w.sum_squares += dec.class_dims[c] * dec.class_dims[c];
    w.sum_mult_squares += dec.multiplicities[c] * dec.multiplicities[c];
  }
  for (const auto& m : dec.modules) {
    if (!m.primary) continue;
    w.primary_dim = m.dim();
    w.primary_multiplicity = dec.multiplicities[static_cast<std::size_t>(m.cls)];
  }
  return w;
}

std::pair<int, int> endpoint_one_bridge(const TModuleDecomposition& dec, const ModuleSetting& st,
                                        const ToleranceContext& ctx) {
  std::vector<int> classes;
  std::vector<Vec<double>> cols;
  for (const auto& m : dec.modules) {
    if (m.r != 1) continue;
    classes.push_back(m.cls);
    cols.push_back(line_vector(st.Estar[1], m.space.vectors));
  }
  std::sort(classes.begin(), classes.end());
  const int nclasses = static_cast<int>(std::unique(classes.begin(), classes.end()) - classes.begin());
  if (cols.empty()) return {nclasses, 0};
  // E*_1 W (W = sum of endpoint-1 modules) is spanned by the E*_1 lines.
  Mat<double> b(st.order, static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) b.col(static_cast<Index>(k)) = cols[k];
  const auto basis = SubspaceBasis<double>::span_of(b, ctx);
  const Mat<double> loc = basis.vectors.transpose() * st.Estar[1] * st.A[1] * st.Estar[1] * basis.vectors;
  const auto eig = symmetric_eigendecomposition(symmetrize(loc), ctx);
  return {nclasses, static_cast<int>(eig.size())};
}

std::string profile_signature(const TModuleDecomposition& dec) {
  std::vector<std::string> profiles;
  for (const auto& m : dec.modules) {
    std::ostringstream os;
    os << m.r << ',' << m.s << ',' << m.d << ':';
    for (Index x : m.shape) os << x << ' ';
    profiles.push_back(os.str());
  }
  std::sort(profiles.begin(), profiles.end());
  std::vector<Index> mults = dec.multiplicities;
  std::sort(mults.begin(), mults.end());
  std::ostringstream os;
  os << "classes=" << dec.classes() << " mult=";
  for (Index m : mults) os << m << ' ';
  os << "profiles=";
  for (const auto& p : profiles) os << '[' << p << ']';
  return os.str();
}

#define QDRG_INSTANTIATE(S)                                                                                     \
  template ModuleSetting module_setting<S>(const MatrixAlgebra<S>&, const BoseMesnerData<S>&, const DualData<S>&); \
  template MatrixAlgebra<S> commutant<S>(const std::vector<Mat<S>>&, const ToleranceContext&);                  \
  template std::optional<bool> exact_recheck<S>(const TModule&, const BoseMesnerData<S>&, const DualData<S>&);

QDRG_INSTANTIATE(Exact)
QDRG_INSTANTIATE(double)

#undef QDRG_INSTANTIATE

}  // namespace qdrg
