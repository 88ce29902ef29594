#ifndef QDRG_GRAPHS_HPP
#define QDRG_GRAPHS_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qdrg/errors.hpp"
#include "qdrg/scalar.hpp"

namespace qdrg {

enum class Family { hamming, johnson, grassmann, cycle };

// hamming:D,N  johnson:N,D  grassmann:q,N,D  cycle:n
struct GraphSpec {
  Family family = Family::cycle;
  std::vector<long> params;

  static GraphSpec parse(const std::string& text);
  std::string to_string() const;
  void validate() const;  // throws UsageError
  // Vertex count from the closed formulas (N^D, binomials, Gaussian binomials).
  long expected_order() const;
};

class Graph {
 public:
  static Graph build(const GraphSpec& spec);
  // Labels default to "0", "1", ...
  static Graph from_adjacency(const Eigen::MatrixXi& adjacency, std::vector<std::string> labels = {},
                              std::string name = "custom");

  Index order() const noexcept { return adjacency_.rows(); }
  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Eigen::MatrixXi& adjacency() const noexcept { return adjacency_; }
  // -1 marks unreachable pairs.
  const Eigen::MatrixXi& distances() const noexcept { return dist_; }
  int distance(Index y, Index z) const { return dist_(y, z); }
  int diameter() const noexcept { return diameter_; }
  bool connected() const noexcept { return connected_; }
  long valency(Index y) const { return adjacency_.row(y).sum(); }

  std::optional<Index> find_label(const std::string& label) const;
  // Gamma_i(x), ascending vertex order.
  std::vector<Index> sphere(Index x, int i) const;

 private:
  Graph(std::string name, std::vector<std::string> labels, Eigen::MatrixXi adjacency);

  std::string name_;
  std::vector<std::string> labels_;
  Eigen::MatrixXi adjacency_;
  Eigen::MatrixXi dist_;
  int diameter_ = 0;
  bool connected_ = true;
};

inline Graph build_graph(const GraphSpec& spec) { return Graph::build(spec); }
inline Graph build_graph(const std::string& spec) { return Graph::build(GraphSpec::parse(spec)); }

struct IntersectionData {
  int diameter = 0;
  long k = 0;
  std::vector<std::vector<std::vector<long>>> p;  // p[h][i][j]
  std::vector<long> c, a, b, ki;

  long operator()(int h, int i, int j) const { return p[h][i][j]; }
};

// Two pairs at the same distance h whose counts |Gamma_i(y) & Gamma_j(z)| differ.
struct NotDRG {
  Index y1 = 0, z1 = 0, y2 = 0, z2 = 0;
  int h = 0, i = 0, j = 0;
  long count1 = 0, count2 = 0;
  std::string describe(const Graph& g) const;
};

std::variant<IntersectionData, NotDRG> certify_distance_regular(const Graph& g);
// Throws VerificationError carrying the witness when g is not distance-regular.
IntersectionData require_distance_regular(const Graph& g);

// A_0 .. A_D.
template <class S>
std::vector<Mat<S>> distance_matrices(const Graph& g) {
  std::vector<Mat<S>> out;
  for (int i = 0; i <= g.diameter(); ++i) {
    out.push_back(g.distances().unaryExpr([i](int d) { return S(d == i ? 1 : 0); }));
  }
  return out;
}

}  // namespace qdrg

#endif  // QDRG_GRAPHS_HPP
