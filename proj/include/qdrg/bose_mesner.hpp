#ifndef QDRG_BOSE_MESNER_HPP
#define QDRG_BOSE_MESNER_HPP

#include <vector>

#include "qdrg/graphs.hpp"
#include "qdrg/linalg.hpp"

namespace qdrg {

// q[h][i][j]
template <class S>
using KreinTable = std::vector<std::vector<std::vector<S>>>;

template <class S>
struct BoseMesnerData {
  int diameter = 0;
  Index order = 0;
  std::vector<Mat<S>> A;  // distance matrices A_0..A_D
  std::vector<S> theta;   // theta_0 = k
  std::vector<Mat<S>> E;
  std::vector<Index> multiplicity;
  KreinTable<S> krein;
  // Q-polynomial orderings, each a permutation sigma of 0..D with sigma[0] = 0,
  // relative to the current indexing of E.  Sorted lexicographically.
  std::vector<std::vector<int>> orderings;
  // Permutation that was applied to reach the current indexing from the
  // descending-eigenvalue order (identity until apply_ordering is called).
  std::vector<int> applied;
};

// Exact: eigenvalues from quadratic_spectrum, E_i by the product formula
// (expanded over powers of A).  Throws UsageError when the spectrum leaves
// the exact domain.  Float: eigenprojectors from the Jacobi decomposition.
// Every structural identity is verified before return.
template <class S>
BoseMesnerData<S> build_bose_mesner(const Graph& g, const IntersectionData& data, const ToleranceContext& ctx = {});

// Expansion of |X|(E_i o E_j) in the E_h basis; throws VerificationError when
// the expansion residual exceeds the bound.
template <class S>
KreinTable<S> krein_parameters(const BoseMesnerData<S>& bm, const ToleranceContext& ctx = {});

// Exact: != 0.  Float: |q| > 1e-8 max|q|.
template <class S>
bool krein_nonzero(const KreinTable<S>& q, const S& value);

template <class S>
std::vector<std::vector<int>> find_q_polynomial_orderings(const KreinTable<S>& q);

// Checks conditions (i) and (ii) for every triple after reindexing by sigma.
template <class S>
bool is_q_polynomial_ordering(const KreinTable<S>& q, const std::vector<int>& sigma);

// Reindexes E, theta, multiplicities, Krein table so that E'_i = E_sigma(i).
template <class S>
BoseMesnerData<S> apply_ordering(const BoseMesnerData<S>& bm, const std::vector<int>& sigma);

// True when the adjacency spectrum stays in Q or a single Q(sqrt m).
bool has_exact_spectrum(const Graph& g);

}  // namespace qdrg

#endif  // QDRG_BOSE_MESNER_HPP
