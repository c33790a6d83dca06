#pragma once

#include <optional>
#include <string>
#include <vector>

#include "syncert/lmi.hpp"
#include "syncert/linalg.hpp"
#include "syncert/types.hpp"

namespace syncert {

/// J(x) ∈ conv{vertices} + cone{cone_generators}.
struct HullConeBound {
  std::vector<MatX> vertices;
  std::vector<MatX> cone_generators;
};

/// Rank-one box term A_i = left·rightᵀ.
struct RankOneTerm {
  VecX left;
  VecX right;
};

/// J(x) ∈ {base + Σ ω_i·left_i·right_iᵀ : ω ∈ [0,1]^l}.
struct BoxBound {
  MatX base;
  std::vector<RankOneTerm> terms;
};

/// Which components carry nonzero coupling (Laplacians) and which of those are
/// non-symmetric. Coupled components get the PEk+EkP ⪰ 0 condition; both sets
/// pin the off-diagonal of row/column k of P to zero (for P ≻ 0 the two
/// statements are equivalent).
struct CouplingSpec {
  std::vector<bool> coupled;
  std::vector<bool> nonsymmetric;

  static CouplingSpec none(int n);
  static CouplingSpec all(int n);
};

enum class CertMethod { hull_cone, box, secant_diagonal };

struct Certificate {
  SymMatrix P;    // n×n, positive definite
  double epsilon; // strict margin of condition P·reduced(J) + reduced(J)ᵀ·P ⪯ -ε·I
  VecX lambda2s;
  CertMethod method;
  std::vector<double> residuals;              // λmax per strict constraint at the solution
  std::vector<double> commutation_residuals;  // λmin(PEk+EkP) per required k
  std::vector<bool> commutation_checked;      // per component
};

struct CertifyResult {
  std::optional<Certificate> certificate;
  LmiResult solver;
  std::string failure_reason;  // empty on success

  bool feasible() const { return certificate.has_value(); }
};

/// Z − Σ_k λ₂⁽ᵏ⁾·Ek (per-component subtraction on the diagonal).
MatX reduced_matrix(const MatX& z, const VecX& lambda2s);

/// Augmented matrix [[base − Σ λ₂·Ek, B],[Cᵀ, −I_l]] with B = [left_1 … left_l],
/// C = [right_1 … right_l].
MatX augmented_box_matrix(const BoxBound& b, const VecX& lambda2s);

/// Enumerates the 2^l vertices of a box (l ≤ 12).
HullConeBound hull_from_box(const BoxBound& b);

CertifyResult certify_hull_cone(const HullConeBound& bound, const VecX& lambda2s,
                                const CouplingSpec& coupling, const LmiOptions& opts = {});

CertifyResult certify_box(const BoxBound& bound, const VecX& lambda2s,
                          const CouplingSpec& coupling, const LmiOptions& opts = {});

/// Cyclic route: permute the augmented matrix to cyclic form, solve with a
/// diagonal variable, and transfer the diagonal back through the permutation.
/// Fails with a reason when the augmented matrix admits no cyclic form.
CertifyResult certify_secant_diagonal(const BoxBound& bound, const VecX& lambda2s,
                                      const CouplingSpec& coupling, const LmiOptions& opts = {});

struct SecantResult {
  bool pass;
  double ratio;      // Π α_k β_k / Π (η_k + λ₂⁽ᵏ⁾)
  double threshold;  // secⁿ(π/n)
};

/// Strict inequality: pass ⇔ ratio < threshold.
SecantResult secant_criterion(const VecX& etas, const VecX& alphabetas, const VecX& lambda2s);

/// perm[a] = original index placed at cyclic position a. mtilde(a,b) = m(perm[a], perm[b]).
struct CyclicForm {
  std::vector<int> perm;
  MatX mtilde;
};

/// Searches for a simultaneous row/column permutation putting m into cyclic
/// form: nonzeros confined to the diagonal, the (a, a−1) band and the (0, dim−1)
/// corner. Backtracking over the nonzero pattern; deterministic (lowest valid
/// index first, so an already-cyclic matrix maps to the identity permutation).
std::optional<CyclicForm> cyclic_permutation(const MatX& m);

/// Diagonal of Gᵀ·diag(ptilde)·G for the permutation behind a CyclicForm:
/// entry perm[a] of the result is ptilde[a].
VecX diagonal_stability_transfer(const std::vector<int>& perm, const VecX& ptilde_diag);

}  // namespace syncert
