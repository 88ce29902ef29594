#include "doctest.h"

#include <gmpxx.h>

#include <stdexcept>

#include "qdrg/terwilliger.hpp"

using namespace qdrg;

namespace {

struct Fixture {
  Graph g;
  IntersectionData data;
  BoseMesnerData<Exact> bm;
  DualData<Exact> dual;
};

Fixture make(const std::string& spec, Index x = 0) {
  Graph g = build_graph(spec);
  auto data = require_distance_regular(g);
  auto bm = build_bose_mesner<Exact>(g, data);
  bm = apply_ordering(bm, bm.orderings.front());
  auto dual = build_dual(g, bm, x);
  return {std::move(g), std::move(data), std::move(bm), std::move(dual)};
}

// Independent rank: vectorize column-major into mpq and eliminate.  Only for
// rational matrices.
Index mpq_rank(const std::vector<Mat<Exact>>& mats) {
  if (mats.empty()) return 0;
  const Index n = mats[0].size();
  std::vector<std::vector<mpq_class>> rows;
  for (const auto& m : mats) {
    std::vector<mpq_class> r(static_cast<std::size_t>(n));
    for (Index j = 0; j < m.cols(); ++j) {
      for (Index i = 0; i < m.rows(); ++i) {
        if (!m(i, j).is_rational()) throw std::runtime_error("mpq_rank: irrational entry");
        r[static_cast<std::size_t>(j * m.rows() + i)] = m(i, j).rational_part().to_mpq();
      }
    }
    rows.push_back(std::move(r));
  }
  Index rank = 0;
  for (Index c = 0; c < n && rank < static_cast<Index>(rows.size()); ++c) {
    const auto cs = static_cast<std::size_t>(c);
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < rows.size() && rows[piv][cs] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[static_cast<std::size_t>(rank)]);
    const auto& p = rows[static_cast<std::size_t>(rank)];
    for (std::size_t r = static_cast<std::size_t>(rank) + 1; r < rows.size(); ++r) {
      if (rows[r][cs] == 0) continue;
      const mpq_class f = rows[r][cs] / p[cs];
      for (std::size_t k = cs; k < p.size(); ++k) rows[r][k] -= f * p[k];
    }
    ++rank;
  }
  return rank;
}

bool in_span(const MatrixAlgebra<Exact>& alg, const Mat<Exact>& m) {
  auto all = alg.basis;
  const Index before = mpq_rank(all);
  all.push_back(m);
  return mpq_rank(all) == before;
}

}  // namespace

TEST_CASE("<A> on H(3,3) is the Bose-Mesner algebra") {
  const auto f = make("hamming:3,3");
  const auto alg = generate_algebra<Exact>({f.bm.A[1]});
  CHECK(alg.dim() == 4);
  CHECK(alg.certificate.closed);
  CHECK(alg.certificate.transpose_closed);
  CHECK(alg.certificate.contains_unit);
  for (const auto& ai : f.bm.A) CHECK(in_span(alg, ai));
  CHECK(check_commutative<Exact>(alg.basis));
  CHECK(pairwise_closure_residual(alg) == 0.0);
}

TEST_CASE("<E*_0..E*_D> is (D+1)-dimensional and commutative") {
  for (const char* spec : {"hamming:3,3", "cycle:8", "johnson:6,3"}) {
    CAPTURE(spec);
    const auto f = make(spec);
    const auto alg = generate_algebra<Exact>(f.dual.Estar);
    CHECK(alg.dim() == f.bm.diameter + 1);
    CHECK(check_commutative<Exact>(alg.basis));
  }
}

TEST_CASE("closure is independent of the seed on C8") {
  const auto f = make("cycle:8");
  const auto t1 = generate_algebra<Exact>({f.bm.A[1], f.dual.Astar1()});
  std::vector<Mat<Exact>> seeds = f.bm.A;
  for (const auto& e : f.dual.Estar) seeds.push_back(e);
  const auto t2 = generate_algebra<Exact>(seeds);
  const auto t3 = terwilliger_algebra(f.g, f.bm, f.dual);
  CHECK(t1.dim() == t2.dim());
  CHECK(t2.dim() == t3.dim());
  // The three spans coincide, not only their dimensions.
  auto all = t1.basis;
  for (const auto& b : t3.basis) all.push_back(b);
  CHECK(matrix_set_rank<Exact>(all) == t1.dim());
  CHECK(pairwise_closure_residual(t3) == 0.0);
}

TEST_CASE("block closure agrees with generic closure") {
  for (const char* spec : {"hamming:3,3", "johnson:6,3"}) {
    CAPTURE(spec);
    const auto f = make(spec);
    std::vector<Mat<Exact>> gens{f.bm.A[1]};
    for (const auto& e : f.dual.Estar) gens.push_back(e);
    const auto generic = generate_algebra<Exact>(gens);
    const auto t = terwilliger_algebra(f.g, f.bm, f.dual);
    CHECK(generic.dim() == t.dim());
    CHECK(t.certificate.closed);
    CHECK(t.certificate.transpose_closed);
    CHECK(t.certificate.contains_unit);
    CHECK(t.dim() >= 2 * f.bm.diameter + 1);
    for (const auto& ai : f.bm.A) CHECK(in_span(t, ai));
    for (const auto& e : f.dual.Estar) CHECK(in_span(t, e));
    CHECK(in_span(t, f.dual.Astar1()));
  }
}

TEST_CASE("T of H(3,3) is not commutative") {
  const auto f = make("hamming:3,3");
  const auto t = terwilliger_algebra(f.g, f.bm, f.dual);
  CHECK_FALSE(check_commutative<Exact>(t.basis));
  const Mat<Exact> ab = multiply<Exact>(f.bm.A[1], f.dual.Astar1());
  const Mat<Exact> ba = multiply<Exact>(f.dual.Astar1(), f.bm.A[1]);
  CHECK(residual<Exact>(ab, ba) > 0.0);
}

TEST_CASE("corner dimensions") {
  SUBCASE("E*_0 T E*_0 on H(3,3)") {
    const auto f = make("hamming:3,3");
    const auto t = terwilliger_algebra(f.g, f.bm, f.dual);
    const auto c = corner(t, f.dual.Estar[0]);
    // E*_0 acts on a line, so the corner is the scalars times E*_0.
    std::vector<Mat<Exact>> imgs;
    for (const auto& b : t.basis) imgs.push_back(multiply<Exact>(multiply<Exact>(f.dual.Estar[0], b), f.dual.Estar[0]));
    CHECK(c.dim() == mpq_rank(imgs));
    CHECK(c.dim() == 1);
    for (const auto& b : c.basis) CHECK(residual<Exact>(b, Mat<Exact>(multiply<Exact>(multiply<Exact>(f.dual.Estar[0], b), f.dual.Estar[0]))) == 0.0);
  }
  SUBCASE("E*_1 T E*_1 on H(3,3)") {
    const auto f = make("hamming:3,3");
    const auto t = terwilliger_algebra(f.g, f.bm, f.dual);
    CHECK(corner(t, f.dual.Estar[1]).dim() == 3);
  }
  SUBCASE("E*_1 T E*_1 on Johnson graphs equals 1 + classes of the first subconstituent") {
    // Gamma(x) in J(N,D) is the D x (N-D) rook graph: 2 classes when D = N-D,
    // 3 otherwise.
    for (const auto& [spec, expect] : std::vector<std::pair<std::string, Index>>{{"johnson:6,3", 3}, {"johnson:7,3", 4}}) {
      CAPTURE(spec);
      const auto f = make(spec);
      const auto t = terwilliger_algebra(f.g, f.bm, f.dual);
      CHECK(corner(t, f.dual.Estar[1]).dim() == expect);
    }
  }
  SUBCASE("non-idempotent projector is refused") {
    const auto f = make("cycle:8");
    const auto t = terwilliger_algebra(f.g, f.bm, f.dual);
    CHECK_THROWS_AS(corner(t, Mat<Exact>(f.bm.A[1])), UsageError);
  }
}

TEST_CASE("corner algebras are commutative and symmetric") {
  for (const char* spec : {"hamming:3,3", "cycle:8", "johnson:6,3", "hamming:3,4"}) {
    CAPTURE(spec);
    const auto f = make(spec);
    const auto t = terwilliger_algebra(f.g, f.bm, f.dual);
    const auto corners = corner_algebras(t, f.bm, f.dual);
    const auto suite = check_corners(corners);
    CHECK(suite.commutative);
    CHECK(suite.symmetric);
    REQUIRE(suite.dims.size() == 4);
    for (const auto& c : corners) {
      for (const auto& b : c.basis) {
        CHECK(residual<Exact>(b, Mat<Exact>(multiply<Exact>(multiply<Exact>(c.projector, b), c.projector))) == 0.0);
      }
    }
    for (const auto& chk : verify_corner_generation(corners, f.bm, f.dual)) {
      CAPTURE(chk.anchor);
      CHECK(chk.pass());
    }
    CHECK(local_symmetry(f.bm, f.dual));
  }
}

TEST_CASE("M itself is commutative") {
  const auto f = make("johnson:6,3");
  CHECK(check_commutative<Exact>(f.bm.A));
  CHECK(check_all_symmetric<Exact>(f.bm.A));
}

TEST_CASE("reduction rules and ideal identities") {
  for (const char* spec : {"hamming:3,3", "cycle:8", "johnson:6,3"}) {
    CAPTURE(spec);
    const auto f = make(spec);
    const auto checks = verify_identities(f.data, f.bm, f.dual);
    CHECK(checks.size() == 12);
    for (const auto& c : checks) {
      CAPTURE(c.identity);
      CHECK(c.pass);
      CHECK(c.residual == 0.0);
    }
  }
  SUBCASE("H(3,3) values") {
    const auto f = make("hamming:3,3");
    CHECK(f.data.k == 6);
    CHECK(f.data.a[1] == 1);
    const Index n = 27;
    const Mat<Exact> j = Mat<Exact>::Constant(n, n, Exact(1));
    const Mat<Exact> e1s = f.dual.Estar[1];
    const Mat<Exact> jj = multiply<Exact>(multiply<Exact>(e1s, j), e1s);
    CHECK(residual<Exact>(multiply<Exact>(jj, jj), Mat<Exact>(Exact(6) * jj)) == 0.0);
  }
}

TEST_CASE("float T agrees with exact T") {
  const auto f = make("cycle:8");
  auto bm = build_bose_mesner<double>(f.g, f.data);
  bm = apply_ordering(bm, bm.orderings.front());
  const auto dual = build_dual(f.g, bm, 0);
  const auto tf = terwilliger_algebra(f.g, bm, dual);
  const auto te = terwilliger_algebra(f.g, f.bm, f.dual);
  CHECK(tf.dim() == te.dim());
  CHECK(tf.certificate.closed);
  CHECK(tf.certificate.max_residual <= 1e-8);
  const auto suite = check_corners(corner_algebras(tf, bm, dual));
  CHECK(suite.commutative);
  CHECK(suite.symmetric);
}

TEST_CASE("closure cap") {
  const auto f = make("hamming:3,3");
  GenerateOptions opt;
  opt.cap = 10;
  CHECK_THROWS_AS(generate_algebra<Exact>({f.bm.A[1], f.dual.Astar1()}, {}, opt), GuardError);
  CHECK_THROWS_AS(terwilliger_algebra(f.g, f.bm, f.dual, {}, 10), GuardError);
}
