#include "doctest.h"

#include <set>

#include "qdrg/graphs.hpp"
#include "qdrg/linalg.hpp"

using namespace qdrg;

namespace {

long neighbours(const Graph& g, Index y) {
  long k = 0;
  for (Index z = 0; z < g.order(); ++z) k += g.adjacency()(y, z);
  return k;
}

std::vector<int> parse_ints(const std::string& label) {
  std::vector<int> v;
  int cur = 0;
  bool in = false;
  for (char ch : label) {
    if (ch >= '0' && ch <= '9') {
      cur = cur * 10 + (ch - '0');
      in = true;
    } else if (in) {
      v.push_back(cur);
      cur = 0;
      in = false;
    }
  }
  if (in) v.push_back(cur);
  return v;
}

}  // namespace

TEST_CASE("spec parsing") {
  CHECK(GraphSpec::parse("hamming:3,3").to_string() == "hamming:3,3");
  CHECK(GraphSpec::parse("grassmann:2,4,2").expected_order() == 35);
  CHECK(GraphSpec::parse("grassmann:2,5,2").expected_order() == 155);
  CHECK_THROWS_AS(GraphSpec::parse("badspec:1"), UsageError);
  CHECK_THROWS_AS(GraphSpec::parse("johnson:5,3"), UsageError);
  CHECK_THROWS_AS(GraphSpec::parse("cycle:2"), UsageError);
  CHECK_THROWS_AS(GraphSpec::parse("grassmann:4,4,2"), UsageError);
  CHECK_THROWS_AS(GraphSpec::parse("grassmann:6,4,2"), UsageError);
  CHECK_THROWS_AS(GraphSpec::parse("hamming:3,x"), UsageError);
  CHECK_THROWS_AS(GraphSpec::parse("hamming:3"), UsageError);
}

TEST_CASE("family sizes and valencies") {
  SUBCASE("hamming(3,3)") {
    const Graph g = build_graph("hamming:3,3");
    CHECK(g.order() == 27);
    // neighbours of a word: change one of D coordinates to one of N-1 other symbols
    for (Index y = 0; y < g.order(); ++y) CHECK(neighbours(g, y) == 3 * (3 - 1));
    CHECK(g.labels()[0] == "(0,0,0)");
    CHECK(g.labels()[1] == "(0,0,1)");
  }
  SUBCASE("johnson(6,3)") {
    const Graph g = build_graph("johnson:6,3");
    CHECK(g.order() == 20);
    for (Index y = 0; y < g.order(); ++y) CHECK(neighbours(g, y) == 3 * (6 - 3));
    CHECK(g.labels()[0] == "{1,2,3}");
  }
  SUBCASE("cycle(8)") {
    const Graph g = build_graph("cycle:8");
    CHECK(g.order() == 8);
    CHECK(g.diameter() == 4);
    for (Index y = 0; y < 8; ++y) CHECK(neighbours(g, y) == 2);
  }
  SUBCASE("grassmann(2,4,2)") {
    const Graph g = build_graph("grassmann:2,4,2");
    CHECK(g.order() == 35);
    CHECK(g.diameter() == 2);
    // q[D]_q [N-D]_q = 2 * 3 * 3
    for (Index y = 0; y < g.order(); ++y) CHECK(neighbours(g, y) == 18);
  }
}

TEST_CASE("distance formulas") {
  SUBCASE("hamming: coordinate differences") {
    const Graph g = build_graph("hamming:3,4");
    for (Index y = 0; y < g.order(); ++y) {
      for (Index z = 0; z < g.order(); ++z) {
        const auto u = parse_ints(g.labels()[static_cast<std::size_t>(y)]);
        const auto v = parse_ints(g.labels()[static_cast<std::size_t>(z)]);
        int diff = 0;
        for (std::size_t t = 0; t < u.size(); ++t) diff += u[t] != v[t];
        CHECK(g.distance(y, z) == diff);
      }
    }
  }
  SUBCASE("johnson: D - |y & z|") {
    const Graph g = build_graph("johnson:7,3");
    for (Index y = 0; y < g.order(); ++y) {
      for (Index z = 0; z < g.order(); ++z) {
        const auto u = parse_ints(g.labels()[static_cast<std::size_t>(y)]);
        const auto v = parse_ints(g.labels()[static_cast<std::size_t>(z)]);
        std::set<int> s(u.begin(), u.end());
        int common = 0;
        for (int x : v) common += static_cast<int>(s.count(x));
        CHECK(g.distance(y, z) == 3 - common);
      }
    }
  }
  SUBCASE("grassmann: D - dim(y & z), via rank over F_2 of the stacked rows") {
    const Graph g = build_graph("grassmann:2,4,2");
    auto rows = [&](Index y) {
      // label "[abcd;efgh]": two 4-bit rows
      const std::string& s = g.labels()[static_cast<std::size_t>(y)];
      return std::vector<int>{std::stoi(s.substr(1, 4), nullptr, 2), std::stoi(s.substr(6, 4), nullptr, 2)};
    };
    for (Index y = 0; y < g.order(); ++y) {
      for (Index z = 0; z < g.order(); ++z) {
        // span size of the four rows over F_2 gives dim(y + z)
        std::set<int> span{0};
        for (int r : rows(y)) {
          std::set<int> next = span;
          for (int s : span) next.insert(s ^ r);
          span = next;
        }
        for (int r : rows(z)) {
          std::set<int> next = span;
          for (int s : span) next.insert(s ^ r);
          span = next;
        }
        int dim_sum = 0;
        while ((1u << dim_sum) < span.size()) ++dim_sum;
        const int dim_meet = 2 + 2 - dim_sum;
        CHECK(g.distance(y, z) == 2 - dim_meet);
      }
    }
  }
}

TEST_CASE("intersection numbers") {
  SUBCASE("cycle(8)") {
    const auto data = require_distance_regular(build_graph("cycle:8"));
    CHECK(data.c == std::vector<long>{0, 1, 1, 1, 2});
    CHECK(data.b == std::vector<long>{2, 1, 1, 1, 0});
    CHECK(data.a == std::vector<long>{0, 0, 0, 0, 0});
    CHECK(data.ki == std::vector<long>{1, 2, 2, 2, 1});
  }
  SUBCASE("hamming(3,3): c_i = i") {
    const auto data = require_distance_regular(build_graph("hamming:3,3"));
    CHECK(data.c == std::vector<long>{0, 1, 2, 3});
    CHECK(data.k == 6);
    CHECK(data.a[1] == 1);
  }
  SUBCASE("path P4 is not distance-regular") {
    Eigen::MatrixXi a = Eigen::MatrixXi::Zero(4, 4);
    for (int i = 0; i < 3; ++i) a(i, i + 1) = a(i + 1, i) = 1;
    const Graph g = Graph::from_adjacency(a);
    const auto r = certify_distance_regular(g);
    REQUIRE(std::holds_alternative<NotDRG>(r));
    const auto& w = std::get<NotDRG>(r);
    CHECK(w.count1 != w.count2);
    CHECK(g.distance(w.y1, w.z1) == g.distance(w.y2, w.z2));
    CHECK_THROWS_AS(require_distance_regular(g), VerificationError);
  }
  SUBCASE("disconnected input") {
    const Graph g = Graph::from_adjacency(Eigen::MatrixXi::Zero(3, 3));
    CHECK_FALSE(g.connected());
    CHECK_THROWS_AS(certify_distance_regular(g), UsageError);
  }
}

TEST_CASE("intersection-number invariants on every family") {
  for (const char* spec : {"hamming:3,3", "hamming:3,4", "johnson:6,3", "johnson:7,3", "johnson:5,2", "grassmann:2,4,2",
                           "cycle:8", "cycle:7"}) {
    CAPTURE(spec);
    const Graph g = build_graph(spec);
    const auto data = require_distance_regular(g);
    const int d = data.diameter;
    long total = 0;
    for (int i = 0; i <= d; ++i) {
      total += data.ki[static_cast<std::size_t>(i)];
      CHECK(data.c[static_cast<std::size_t>(i)] + data.a[static_cast<std::size_t>(i)] + data.b[static_cast<std::size_t>(i)] == data.k);
      if (i >= 1) CHECK(data.c[static_cast<std::size_t>(i)] > 0);
      if (i < d) CHECK(data.b[static_cast<std::size_t>(i)] > 0);
      for (Index y = 0; y < g.order(); ++y) CHECK(static_cast<long>(g.sphere(y, i).size()) == data.ki[static_cast<std::size_t>(i)]);
      for (int h = 0; h <= d; ++h)
        for (int j = 0; j <= d; ++j) CHECK(data(h, i, j) == data(h, j, i));
    }
    CHECK(data.c[1] == 1);
    CHECK(data.a[0] == 0);
    CHECK(data.ki[0] == 1);
    CHECK(total == g.order());
  }
}

TEST_CASE("distance matrices") {
  SUBCASE("A_0 = I and sum = J") {
    const Graph g = build_graph("johnson:6,3");
    const auto as = distance_matrices<Exact>(g);
    CHECK(residual<Exact>(as[0], Mat<Exact>::Identity(20, 20)) == 0.0);
    Mat<Exact> sum = Mat<Exact>::Zero(20, 20);
    for (const auto& a : as) sum += a;
    CHECK(residual<Exact>(sum, Mat<Exact>::Constant(20, 20, Exact(1))) == 0.0);
  }
  SUBCASE("cycle(8): A_4 is the antipodal permutation") {
    const auto as = distance_matrices<Exact>(build_graph("cycle:8"));
    Mat<Exact> perm = Mat<Exact>::Zero(8, 8);
    for (int i = 0; i < 8; ++i) perm(i, (i + 4) % 8) = Exact(1);
    CHECK(residual<Exact>(as[4], perm) == 0.0);
  }
  SUBCASE("A_i A_j = sum p^h_ij A_h on johnson(5,2)") {
    const Graph g = build_graph("johnson:5,2");
    const auto data = require_distance_regular(g);
    const auto as = distance_matrices<Exact>(g);
    for (int i = 0; i <= data.diameter; ++i) {
      for (int j = 0; j <= data.diameter; ++j) {
        Mat<Exact> rhs = Mat<Exact>::Zero(g.order(), g.order());
        for (int h = 0; h <= data.diameter; ++h) rhs += Exact(data(h, i, j)) * as[static_cast<std::size_t>(h)];
        CHECK(residual<Exact>(multiply<Exact>(as[static_cast<std::size_t>(i)], as[static_cast<std::size_t>(j)]), rhs) == 0.0);
      }
    }
  }
}
