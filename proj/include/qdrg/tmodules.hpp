#ifndef QDRG_TMODULES_HPP
#define QDRG_TMODULES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdrg/terwilliger.hpp"

namespace qdrg {

// Float copies of everything the module code needs.  Decomposition always runs
// in double; exact data only enters through exact_recheck.
struct ModuleSetting {
  Index order = 0;
  int diameter = 0;
  std::vector<Mat<double>> generators;  // A, E*_0..E*_D
  std::vector<Mat<double>> t_basis;
  Index dim_t = 0;
  bool dim_t_exact = false;
  std::vector<Mat<double>> A;
  std::vector<Mat<double>> E;
  std::vector<Mat<double>> Estar;
};

template <class S>
ModuleSetting module_setting(const MatrixAlgebra<S>& t, const BoseMesnerData<S>& bm, const DualData<S>& dual);

// {C : CG = GC for every generator}.  Diagonal generators fix the zero pattern
// of C up front; the remaining equations are solved by exact elimination on
// the exact path and through the normal equations on the float path (basis
// orthonormal under the trace form).
template <class S>
MatrixAlgebra<S> commutant(const std::vector<Mat<S>>& generators, const ToleranceContext& ctx = {});

struct TModule {
  SubspaceBasis<double> space;
  int r = 0;       // endpoint
  int s = 0;       // dual endpoint
  int d = 0;       // diameter
  int dual_d = 0;
  std::vector<Index> shape;       // dim E*_{r+i} W
  std::vector<Index> dual_shape;  // dim E_{s+i} W
  bool primary = false;
  std::optional<double> mu;                // r = 1: E*_1 A E*_1 w = mu w
  std::optional<std::vector<double>> phi;  // r + d = D: E*_D A_h E*_D w = phi_h w, h = 1..D
  Index end_dim = 0;
  int cls = -1;
  std::optional<bool> exact_checked;  // nullopt when the projector did not rationalize

  Index dim() const noexcept { return space.dim(); }
};

// Max |G Q - Q Q^T G Q| over the generators, relative to |G|.
double stability_residual(const Mat<double>& q, const ModuleSetting& st);

// Intertwiners W1 -> W2: {X : X G|W1 = G|W2 X}, one w2 x w1 matrix per column
// block; returns the basis (possibly empty).
std::vector<Mat<double>> intertwiners(const Mat<double>& q1, const Mat<double>& q2, const ModuleSetting& st,
                                      const ToleranceContext& ctx = {});

// Throws VerificationError when W is not T-stable.
bool is_irreducible(const SubspaceBasis<double>& w, const ModuleSetting& st, const ToleranceContext& ctx = {});

// Profile plus invariant checks; a violated invariant throws VerificationError
// (that would be a counterexample to sharpness or the shape laws).
TModule module_profile(const SubspaceBasis<double>& w, const ModuleSetting& st, const ToleranceContext& ctx = {});

bool modules_isomorphic(const TModule& w1, const TModule& w2, const ModuleSetting& st,
                        const ToleranceContext& ctx = {});

// mu / phi criteria; nullopt when the criterion does not apply to the pair.
std::optional<bool> mu_criterion(const TModule& w1, const TModule& w2, const ToleranceContext& ctx = {});
std::optional<bool> phi_criterion(const TModule& w1, const TModule& w2, const ToleranceContext& ctx = {});

struct CriterionTally {
  long mu_pairs = 0, mu_agree = 0;
  long phi_pairs = 0, phi_agree = 0;
  bool ok() const noexcept { return mu_pairs == mu_agree && phi_pairs == phi_agree; }
};

struct TModuleDecomposition {
  std::vector<TModule> modules;  // sorted by class, then by first appearance
  std::vector<Index> multiplicities;  // per class
  std::vector<Index> class_dims;      // n_i
  Index dim_t = 0;
  Index dim_commutant = 0;
  std::uint64_t seed = 0;
  int draws = 0;
  std::vector<long long> coefficients;  // of the accepted draw
  double max_stability = 0.0;
  double max_overlap = 0.0;  // |Q_a^T Q_b| across distinct modules
  CriterionTally criteria;

  int classes() const noexcept { return static_cast<int>(class_dims.size()); }
};

// Random symmetric element of the commutant, eigenspaces as candidates, each
// certified irreducible or split further (End(W) eigenspaces, then Tw).
// Redraws up to 5 times; GuardError afterwards.
TModuleDecomposition decompose_standard_module(const ModuleSetting& st, const MatrixAlgebra<double>& comm,
                                               const ToleranceContext& ctx = {}, std::uint64_t seed = 1);

// Rationalizes the module projector (denominators up to 10^6) and recomputes
// the shape ranks exactly.  nullopt when rationalization fails.
template <class S>
std::optional<bool> exact_recheck(const TModule& w, const BoseMesnerData<S>& bm, const DualData<S>& dual);

struct WedderburnReport {
  std::vector<Index> summands;  // n_i
  Index sum_squares = 0;
  Index dim_t = 0;
  Index dim_commutant = 0;
  Index sum_mult_squares = 0;
  Index primary_multiplicity = 0;
  Index primary_dim = 0;
  int diameter = 0;

  bool wedderburn_ok() const noexcept { return sum_squares == dim_t; }
  bool commutant_ok() const noexcept { return sum_mult_squares == dim_commutant; }
  bool primary_ok() const noexcept { return primary_multiplicity == 1 && primary_dim == diameter + 1; }
  bool ok() const noexcept { return wedderburn_ok() && commutant_ok() && primary_ok(); }
};

WedderburnReport wedderburn_report(const TModuleDecomposition& dec, int diameter);

// Number of classes with r = 1 against the number of distinct eigenvalues of
// E*_1 A E*_1 on the span of the endpoint-1 modules.
std::pair<int, int> endpoint_one_bridge(const TModuleDecomposition& dec, const ModuleSetting& st,
                                        const ToleranceContext& ctx = {});

// Comparison key for seed-independence: class count, sorted multiplicities and
// the sorted multiset of (r, s, d, shape).
std::string profile_signature(const TModuleDecomposition& dec);

}  // namespace qdrg

#endif  // QDRG_TMODULES_HPP
