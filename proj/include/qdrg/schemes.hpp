#ifndef QDRG_SCHEMES_HPP
#define QDRG_SCHEMES_HPP

#include <optional>
#include <string>
#include <vector>

#include "qdrg/terwilliger.hpp"

namespace qdrg {

template <class S>
struct RestrictedAlgebra {
  std::vector<Index> cell;
  std::vector<Mat<S>> basis;  // cell x cell
  Mat<S> unit;

  Index dim() const noexcept { return static_cast<Index>(basis.size()); }
};

// The corner's projector must be the 0/1 diagonal indicator of `cell`;
// anything else (including E_i corners) is a UsageError.
template <class S>
RestrictedAlgebra<S> restrict_corner(const CornerAlgebra<S>& c, const std::vector<Index>& cell);

using Relation = Eigen::MatrixXi;
using PTable = std::vector<std::vector<std::vector<long>>>;  // p[h][i][j]

struct SchemeVerdict {
  bool is_scheme = false;
  std::string failure;  // first failed condition when !is_scheme
  std::vector<Relation> relations;  // R_0 = identity first
  PTable p;

  int classes() const noexcept { return static_cast<int>(relations.size()); }
  std::vector<long> relation_sizes() const;  // valencies of R_i
};

// Entry-fingerprint partition of cell x cell, then: identity part present,
// every part in the span, as many parts as basis elements, parts symmetric,
// R_i R_j constant on each R_h.
template <class S>
SchemeVerdict detect_scheme(const RestrictedAlgebra<S>& ra, const ToleranceContext& ctx = {});

// Distance scheme of a distance-regular graph.
SchemeVerdict distance_scheme(const Graph& g);

// Same class count and the same p-tables after some relabelling of R_1..R_m.
bool same_parameters(const SchemeVerdict& a, const SchemeVerdict& b);

// Builds `expected` and compares parameters with its distance scheme.
bool match_named_scheme(const SchemeVerdict& verdict, const GraphSpec& expected);

// Graph whose distance scheme the last subconstituent should match:
// H(D, N-1) for hamming, J(N-D, D) written as J(N-D, min(D, N-2D)) for johnson.
// nullopt for cycles, for grassmann (bilinear forms graphs are not built) and
// when the last subconstituent is a single vertex.
std::optional<GraphSpec> last_subconstituent_model(const GraphSpec& spec);

}  // namespace qdrg

#endif  // QDRG_SCHEMES_HPP
