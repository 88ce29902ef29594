#ifndef QDRG_DUAL_ALGEBRA_HPP
#define QDRG_DUAL_ALGEBRA_HPP

#include <string>
#include <vector>

#include "qdrg/bose_mesner.hpp"

namespace qdrg {

template <class S>
struct DualData {
  Index base = 0;
  std::vector<Mat<S>> Estar;  // diagonal 0/1
  std::vector<Mat<S>> Astar;  // diagonal, A*_i = diag(|X| (E_i)_{x,.})
  std::vector<S> theta_star;
  std::vector<Index> sizes;   // dim E*_i V = |Gamma_i(x)|

  const Mat<S>& Astar1() const { return Astar.at(1); }
};

// `bm` must already be indexed by a Q-polynomial ordering (see apply_ordering).
// All dual relations are verified before return; failures throw
// VerificationError naming the identity.
template <class S>
DualData<S> build_dual(const Graph& g, const BoseMesnerData<S>& bm, Index x, const ToleranceContext& ctx = {});

struct TripleReport {
  long checked = 0;
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

// E*_i A_h E*_j = 0 <=> p^h_ij = 0 and E_i A*_h E_j = 0 <=> q^h_ij = 0 for all
// (h, i, j), plus the tridiagonal and h > 2i specializations.
template <class S>
TripleReport verify_triple_products(const IntersectionData& data, const BoseMesnerData<S>& bm, const DualData<S>& dual,
                                    const ToleranceContext& ctx = {});

}  // namespace qdrg

#endif  // QDRG_DUAL_ALGEBRA_HPP
