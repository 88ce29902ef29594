#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "qdrg/linalg.hpp"

using namespace qdrg;

namespace {

Eigen::MatrixXi cycle_adjacency(int n) {
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, (i + 1) % n) = 1;
    a((i + 1) % n, i) = 1;
  }
  return a;
}

// Hamming H(3,3) built from scratch: vertices are base-3 digit triples.
Eigen::MatrixXi hamming33() {
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(27, 27);
  for (int x = 0; x < 27; ++x) {
    for (int y = 0; y < 27; ++y) {
      int diff = 0;
      for (int p = 0, u = x, v = y; p < 3; ++p, u /= 3, v /= 3) diff += (u % 3) != (v % 3);
      a(x, y) = diff == 1;
    }
  }
  return a;
}

// Independent rank oracle: fraction-free elimination over mpq.
long mpq_rank(std::vector<std::vector<mpq_class>> rows) {
  long r = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && r < static_cast<long>(rows.size()); ++c) {
    std::size_t sel = rows.size();
    for (std::size_t i = static_cast<std::size_t>(r); i < rows.size(); ++i) {
      if (rows[i][c] != 0) {
        sel = i;
        break;
      }
    }
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[static_cast<std::size_t>(r)]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == static_cast<std::size_t>(r) || rows[i][c] == 0) continue;
      const mpq_class f = rows[i][c] / rows[static_cast<std::size_t>(r)][c];
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] -= f * rows[static_cast<std::size_t>(r)][j];
    }
    ++r;
  }
  return r;
}

std::vector<mpq_class> flat(const Eigen::MatrixXi& m) {
  std::vector<mpq_class> v;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v.emplace_back(m(i, j));
  return v;
}

}  // namespace

TEST_CASE("gram_trace_basis collapses scalar multiples") {
  const Mat<Exact> i3 = Mat<Exact>::Identity(3, 3);
  const Mat<Exact> two = i3 * Exact(2);
  CHECK(gram_trace_basis<Exact>({i3, two}).size() == 1);
  CHECK(gram_trace_basis<double>({to_double(i3), to_double(two)}).size() == 1);
  CHECK(gram_trace_basis<Exact>({}).empty());
  CHECK_THROWS_AS(gram_trace_basis<Exact>({i3, Mat<Exact>::Identity(2, 2)}), UsageError);
}

TEST_CASE("gram_trace_basis on I, J, A of the 6-cycle") {
  const Eigen::MatrixXi a = cycle_adjacency(6);
  const Eigen::MatrixXi j = Eigen::MatrixXi::Ones(6, 6);
  const Eigen::MatrixXi i = Eigen::MatrixXi::Identity(6, 6);
  const long oracle = mpq_rank({flat(i), flat(j), flat(a)});
  CHECK(oracle == 3);
  const auto basis = gram_trace_basis<Exact>({from_integers<Exact>(i), from_integers<Exact>(j), from_integers<Exact>(a)});
  CHECK(static_cast<long>(basis.size()) == oracle);
  const auto fb = gram_trace_basis<double>({i.cast<double>(), j.cast<double>(), a.cast<double>()});
  REQUIRE(fb.size() == 3);
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q) CHECK(trace_inner(fb[p], fb[q]) == doctest::Approx(p == q ? 1.0 : 0.0));
}

TEST_CASE("gram_trace_basis on pair products in H(3,3)") {
  const Eigen::MatrixXi a = hamming33();
  // distance from vertex 0 = number of nonzero digits
  std::vector<Eigen::MatrixXi> gens{a};
  for (int d = 0; d <= 3; ++d) {
    Eigen::MatrixXi e = Eigen::MatrixXi::Zero(27, 27);
    for (int x = 0; x < 27; ++x) {
      int w = 0;
      for (int u = x, p = 0; p < 3; ++p, u /= 3) w += u % 3 != 0;
      e(x, x) = w == d;
    }
    gens.push_back(e);
  }
  std::vector<Eigen::MatrixXi> prods;
  for (const auto& x : gens)
    for (const auto& y : gens) prods.push_back(x * y);
  prods.resize(27 > prods.size() ? prods.size() : prods.size());
  std::vector<std::vector<mpq_class>> rows;
  std::vector<Mat<Exact>> ex;
  std::vector<Mat<double>> fl;
  for (const auto& p : prods) {
    rows.push_back(flat(p));
    ex.push_back(from_integers<Exact>(p));
    fl.push_back(p.cast<double>());
  }
  const long oracle = mpq_rank(rows);
  CHECK(static_cast<long>(gram_trace_basis<Exact>(ex).size()) == oracle);
  CHECK(static_cast<long>(gram_trace_basis<double>(fl).size()) == oracle);

  SUBCASE("invariant under permutation and recombination") {
    std::mt19937 rng(7);
    std::shuffle(ex.begin(), ex.end(), rng);
    CHECK(static_cast<long>(matrix_set_rank<Exact>(ex)) == oracle);
    std::vector<Mat<Exact>> mixed;
    for (std::size_t k = 0; k < ex.size(); ++k) mixed.push_back(ex[k] + Exact(static_cast<long>(k + 2)) * ex[(k + 1) % ex.size()]);
    // the cyclic map x_k -> x_k + (k+2) x_{k+1} is invertible (det = 1 + (-1)^(n+1) prod(k+2) != 0)
    CHECK(static_cast<long>(matrix_set_rank<Exact>(mixed)) == oracle);
  }
}

TEST_CASE("span tracker coordinates") {
  SpanTracker<Exact> s(3);
  Vec<Exact> a(3), b(3), c(3);
  a << Exact(1), Exact(2), Exact(3);
  b << Exact(0), Exact(1), Exact(1);
  c << Exact(2), Exact(7), Exact(9);  // 2a + 3b
  CHECK(s.insert(a));
  CHECK(s.insert(b));
  CHECK_FALSE(s.insert(c));
  const auto co = s.coordinates(c);
  REQUIRE(co);
  CHECK((*co)[0] == Exact(2));
  CHECK((*co)[1] == Exact(3));

  SpanTracker<double> f(3);
  f.insert(to_double(Mat<Exact>(a)));
  f.insert(to_double(Mat<Exact>(b)));
  const auto fc = f.coordinates(to_double(Mat<Exact>(c)));
  REQUIRE(fc);
  CHECK((*fc)[0] == doctest::Approx(2.0));
  CHECK((*fc)[1] == doctest::Approx(3.0));
}

TEST_CASE("symmetric eigendecomposition") {
  SUBCASE("identity") {
    const auto es = symmetric_eigendecomposition(Mat<double>::Identity(4, 4));
    REQUIRE(es.size() == 1);
    CHECK(es[0].value == doctest::Approx(1.0));
    CHECK(es[0].space.dim() == 4);
  }
  SUBCASE("6-cycle: circulant eigenvalues 2cos(2 pi j / 6)") {
    const auto es = symmetric_eigendecomposition(cycle_adjacency(6).cast<double>());
    REQUIRE(es.size() == 4);
    const double vals[] = {2, 1, -1, -2};
    const Index dims[] = {1, 2, 2, 1};
    for (int k = 0; k < 4; ++k) {
      CHECK(es[static_cast<std::size_t>(k)].value == doctest::Approx(vals[k]));
      CHECK(es[static_cast<std::size_t>(k)].space.dim() == dims[k]);
    }
  }
  SUBCASE("H(3,3) projectors resolve the identity") {
    const auto es = symmetric_eigendecomposition(hamming33().cast<double>());
    REQUIRE(es.size() == 4);
    Index total = 0;
    Mat<double> sum = Mat<double>::Zero(27, 27);
    std::vector<Mat<double>> ps;
    for (const auto& e : es) {
      total += e.space.dim();
      ps.push_back(e.space.vectors * e.space.vectors.transpose());
      sum += ps.back();
    }
    CHECK(total == 27);
    CHECK((sum - Mat<double>::Identity(27, 27)).cwiseAbs().maxCoeff() < 1e-8);
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = 0; j < ps.size(); ++j)
        if (i != j) CHECK((ps[i] * ps[j]).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("non-symmetric input rejected") {
    Mat<double> m(2, 2);
    m << 0, 1, 0, 0;
    CHECK_THROWS_AS(symmetric_eigendecomposition(m), UsageError);
  }
}

TEST_CASE("integer and quadratic spectra") {
  SUBCASE("5-cycle is not integral") {
    const Mat<Exact> a = from_integers<Exact>(cycle_adjacency(5));
    const auto mp = minimal_polynomial(a);
    // (x - 2)(x^2 + x - 1)
    REQUIRE(mp.size() == 4);
    CHECK(mp[0] == Rational(2));
    CHECK(mp[1] == Rational(-3));
    CHECK(mp[2] == Rational(-1));
    CHECK(mp[3] == Rational(1));
    CHECK_FALSE(integer_spectrum(a).has_value());
    const auto q = quadratic_spectrum(a);
    REQUIRE(q);
    CHECK(q->size() == 3);
    CHECK((*q)[1] == Exact(Rational(-1, 2), Rational(1, 2), 5));
  }
  SUBCASE("H(3,3)") {
    const auto s = integer_spectrum(from_integers<Exact>(hamming33()));
    REQUIRE(s);
    CHECK(*s == std::vector<long>{6, 3, 0, -3});
  }
  SUBCASE("8-cycle over Q(sqrt2)") {
    const auto q = quadratic_spectrum(from_integers<Exact>(cycle_adjacency(8)));
    REQUIRE(q);
    REQUIRE(q->size() == 5);
    CHECK((*q)[1] == Exact::sqrt_of(2));
    CHECK((*q)[2] == Exact(0));
    CHECK((*q)[3] == -Exact::sqrt_of(2));
  }
}

TEST_CASE("subspace operations") {
  const Mat<double> a = cycle_adjacency(6).cast<double>();
  const auto whole = SubspaceBasis<double>::whole(6);
  CHECK(same_span(intersect(whole, whole), whole));
  const Mat<double> e0 = Mat<double>::Constant(6, 6, 1.0 / 6.0);
  const auto ones = project(e0, whole);
  CHECK(ones.dim() == 1);
  CHECK(std::abs(ones.vectors.col(0).sum()) == doctest::Approx(std::sqrt(6.0)));
  const auto comp = orthogonal_complement_within(ones, whole);
  CHECK(comp.dim() == 5);
  CHECK((comp.vectors.transpose() * comp.vectors - Mat<double>::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);

  const auto ew = SubspaceBasis<Exact>::whole(6);
  const auto eones = project<Exact>(from_integers<Exact>(Eigen::MatrixXi::Ones(6, 6)), ew);
  CHECK(eones.dim() == 1);
  CHECK(orthogonal_complement_within(eones, ew).dim() == 5);
  CHECK(rank<Exact>(from_integers<Exact>(cycle_adjacency(6))) == rank<double>(a));
  // C6 has no zero eigenvalue, C4 has a double one
  CHECK(nullspace<Exact>(from_integers<Exact>(cycle_adjacency(6))).cols() == 0);
  CHECK(nullspace<double>(a).cols() == 0);
  const Mat<Exact> c4 = from_integers<Exact>(cycle_adjacency(4));
  const Mat<Exact> n4 = nullspace<Exact>(c4);
  CHECK(n4.cols() == 2);
  CHECK(is_zero_matrix<Exact>(multiply<Exact>(c4, n4), 0.0));
  CHECK(nullspace<double>(to_double(c4)).cols() == 2);
}

TEST_CASE("tolerance context validation") {
  ToleranceContext ctx;
  CHECK_NOTHROW(ctx.validate());
  ctx.cluster_width = 1e-12;
  CHECK_THROWS_AS(ctx.validate(), UsageError);
  ctx = {};
  ctx.residual_bound = 0;
  CHECK_THROWS_AS(ctx.validate(), UsageError);
}
