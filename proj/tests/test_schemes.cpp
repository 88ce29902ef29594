#include "doctest.h"

#include "qdrg/schemes.hpp"

using namespace qdrg;

namespace {

struct Fixture {
  Graph g;
  IntersectionData data;
  BoseMesnerData<Exact> bm;
  DualData<Exact> dual;
  MatrixAlgebra<Exact> t;
};

Fixture make(const std::string& spec, Index x = 0) {
  Fixture f{build_graph(spec), {}, {}, {}, {}};
  f.data = require_distance_regular(f.g);
  f.bm = build_bose_mesner<Exact>(f.g, f.data);
  f.bm = apply_ordering(f.bm, f.bm.orderings.front());
  f.dual = build_dual(f.g, f.bm, x);
  f.t = terwilliger_algebra(f.g, f.bm, f.dual);
  return f;
}

SchemeVerdict cell_scheme(const Fixture& f, int i) {
  const auto c = corner(f.t, f.dual.Estar[static_cast<std::size_t>(i)]);
  return detect_scheme(restrict_corner(c, f.g.sphere(f.dual.base, i)));
}

// Pairs of neighbours of x in H(D,N) are in the same clique iff they change
// the same coordinate.
int hamming_changed_coordinate(const Graph& g, Index x, Index y) {
  const auto& a = g.labels()[static_cast<std::size_t>(x)];
  const auto& b = g.labels()[static_cast<std::size_t>(y)];
  int pos = -1, coord = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == ',') ++coord;
    if (a[k] != b[k]) pos = coord;
  }
  return pos;
}

}  // namespace

TEST_CASE("restriction of E*_1 T E*_1 on H(3,3)") {
  const auto f = make("hamming:3,3");
  const auto cell = f.g.sphere(0, 1);
  const auto ra = restrict_corner(corner(f.t, f.dual.Estar[1]), cell);
  CHECK(ra.cell.size() == 6);
  CHECK(ra.dim() == 3);
  for (const auto& b : ra.basis) CHECK(b.rows() == 6);
  CHECK(ra.unit == Mat<Exact>::Identity(6, 6));
}

TEST_CASE("last cell of H(3,3) has (N-1)^D vertices") {
  const auto f = make("hamming:3,3");
  const auto ra = restrict_corner(corner(f.t, f.dual.Estar[3]), f.g.sphere(0, 3));
  CHECK(ra.cell.size() == 8);
}

TEST_CASE("wrong cell is refused") {
  const auto f = make("hamming:3,3");
  const auto c = corner(f.t, f.dual.Estar[1]);
  CHECK_THROWS_AS(restrict_corner(c, f.g.sphere(0, 2)), UsageError);
  CHECK_THROWS_AS(restrict_corner(corner(f.t, f.bm.E[1]), f.g.sphere(0, 1)), UsageError);
}

TEST_CASE("first subconstituent of H(3,3): identity, same clique, other clique") {
  const auto f = make("hamming:3,3");
  const auto v = cell_scheme(f, 1);
  REQUIRE(v.is_scheme);
  CHECK(v.classes() == 3);
  const auto cell = f.g.sphere(0, 1);
  // Oracle from labels.
  for (std::size_t a = 0; a < cell.size(); ++a) {
    for (std::size_t b = 0; b < cell.size(); ++b) {
      const int expect = a == b ? 0 : (hamming_changed_coordinate(f.g, 0, cell[a]) == hamming_changed_coordinate(f.g, 0, cell[b]) ? 1 : 2);
      int got = -1;
      for (int r = 0; r < 3; ++r) {
        if (v.relations[static_cast<std::size_t>(r)](static_cast<Index>(a), static_cast<Index>(b))) got = r;
      }
      // R_1 and R_2 may come in either order; sizes tell them apart.
      const long sz = got >= 0 ? v.relation_sizes()[static_cast<std::size_t>(got)] : -1;
      CHECK(sz == (expect == 0 ? 1 : expect == 1 ? 1 : 4));
    }
  }
  // Nonnegative integer structure constants.
  for (const auto& ph : v.p) {
    for (const auto& row : ph) {
      for (long x : row) CHECK(x >= 0);
    }
  }
}

TEST_CASE("first subconstituent class counts") {
  CHECK(cell_scheme(make("johnson:6,3"), 1).classes() == 3);
  CHECK(cell_scheme(make("johnson:7,3"), 1).classes() == 4);
  CHECK(cell_scheme(make("grassmann:2,4,2"), 1).classes() == 4);
  const auto c8 = cell_scheme(make("cycle:8"), 1);
  CHECK(c8.is_scheme);
  CHECK(c8.classes() == 2);
  CHECK(c8.relations[0] == Eigen::MatrixXi::Identity(2, 2));
}

TEST_CASE("last subconstituents match the named graphs") {
  {
    const auto f = make("hamming:3,3");
    const auto v = cell_scheme(f, 3);
    REQUIRE(v.is_scheme);
    const auto model = last_subconstituent_model(GraphSpec::parse("hamming:3,3"));
    REQUIRE(model);
    CHECK(model->to_string() == GraphSpec::parse("hamming:3,2").to_string());
    CHECK(match_named_scheme(v, *model));
    CHECK_FALSE(match_named_scheme(v, GraphSpec::parse("johnson:6,3")));
  }
  {
    const auto f = make("johnson:7,3");
    const auto v = cell_scheme(f, 3);
    REQUIRE(v.is_scheme);
    const auto model = last_subconstituent_model(GraphSpec::parse("johnson:7,3"));
    REQUIRE(model);
    // J(4,3) written as J(4,1).
    CHECK(model->to_string() == GraphSpec::parse("johnson:4,1").to_string());
    CHECK(v.classes() == 2);
    CHECK(match_named_scheme(v, *model));
  }
  CHECK_FALSE(last_subconstituent_model(GraphSpec::parse("johnson:6,3")));
  CHECK_FALSE(last_subconstituent_model(GraphSpec::parse("cycle:8")));
}

TEST_CASE("full Bose-Mesner algebra returns the distance relations") {
  for (const char* spec : {"hamming:3,3", "johnson:6,3", "cycle:8"}) {
    CAPTURE(spec);
    const auto f = make(spec);
    CornerAlgebra<Exact> m{Mat<Exact>::Identity(f.bm.order, f.bm.order), f.bm.E, "M"};
    std::vector<Index> all(static_cast<std::size_t>(f.bm.order));
    for (Index i = 0; i < f.bm.order; ++i) all[static_cast<std::size_t>(i)] = i;
    const auto v = detect_scheme(restrict_corner(m, all));
    REQUIRE(v.is_scheme);
    CHECK(v.classes() == f.bm.diameter + 1);
    // Each detected relation is one of the distance matrices.
    for (const auto& r : v.relations) {
      bool found = false;
      for (int i = 0; i <= f.bm.diameter; ++i) found = found || r == (f.g.distances().array() == i).cast<int>().matrix();
      CHECK(found);
    }
    CHECK(same_parameters(v, distance_scheme(f.g)));
  }
}

TEST_CASE("non-scheme algebra is rejected") {
  // span{I, A} of the path P3 is not closed, and its fingerprint parts
  // {diag}, {edges}, {ends} outnumber the basis.
  RestrictedAlgebra<Exact> ra;
  ra.cell = {0, 1, 2};
  ra.unit = Mat<Exact>::Identity(3, 3);
  Mat<Exact> a = Mat<Exact>::Zero(3, 3);
  a(0, 1) = a(1, 0) = a(1, 2) = a(2, 1) = Exact(1);
  ra.basis = {ra.unit, a};
  const auto v = detect_scheme(ra);
  CHECK_FALSE(v.is_scheme);
  CHECK_FALSE(v.failure.empty());
}

TEST_CASE("float detection agrees with exact") {
  const auto f = make("johnson:7,3");
  auto bm = build_bose_mesner<double>(f.g, f.data);
  bm = apply_ordering(bm, bm.orderings.front());
  const auto dual = build_dual(f.g, bm, 0);
  const auto t = terwilliger_algebra(f.g, bm, dual);
  const auto v = detect_scheme(restrict_corner(corner(t, dual.Estar[1]), f.g.sphere(0, 1)));
  CHECK(v.is_scheme);
  CHECK(same_parameters(v, cell_scheme(f, 1)));
}
