#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "syncert/linalg.hpp"
#include "syncert/types.hpp"

namespace syncert {

enum class VariableKind { full_symmetric, diagonal, block_full_plus_scalars };

/// Parametrization of the matrix variable. The free parameters θ map linearly
/// onto the variable matrix V(θ) = Σ θ_i·G_i through the basis below.
///
/// dof ordering:
///   full_symmetric(n):            (i,j) pairs, i ≤ j, row-major upper triangle
///   diagonal(n):                  diagonal entries in order
///   block_full_plus_scalars(n,l): the n×n upper-left block as full_symmetric,
///                                 followed by the l diagonal scalars
struct VariableStructure {
  VariableKind kind = VariableKind::full_symmetric;
  int n = 0;
  int l = 0;

  static VariableStructure full_symmetric(int n);
  static VariableStructure diagonal(int n);
  static VariableStructure block_full_plus_scalars(int n, int l);

  int dof() const;
  int dim() const;  // dimension of the variable matrix
  MatX basis(int dof_index) const;
  MatX assemble(const VecX& theta) const;
  bool dof_on_diagonal(int dof_index) const;
  /// dofs holding the off-diagonal entries of row/column k of the n×n block.
  std::vector<int> off_diagonal_dofs_of(int k) const;
};

/// Affine symmetric-matrix-valued map θ ↦ constant + Σ θ_i coeff[i].
struct AffineBlock {
  MatX constant;
  std::vector<MatX> coeff;  // one entry per dof
  std::string label;
};

/// Block V(θ)·M + Mᵀ·V(θ) over the full variable matrix.
AffineBlock sandwich_block(const VariableStructure& s, const MatX& m, std::string label);

struct LmiProblem {
  VariableStructure structure;
  std::vector<AffineBlock> strict_blocks;   // required ≺ 0
  std::vector<AffineBlock> semidef_blocks;  // required ⪯ 0
  std::vector<int> zero_dofs;               // θ entries pinned to zero
  double delta_p = 1e-6;                    // V(θ) ⪰ delta_p·I
};

struct LmiOptions {
  int restarts = 5;
  int max_iters = 5000;
  double delta_strict = 1e-6;
  double semidef_tol = 1e-9;
  std::uint64_t seed = 0;
  /// Optional warm start for θ (defaults to the identity variable matrix).
  /// Restart perturbations are taken around this point.
  std::optional<VecX> init_theta;
};

struct LmiResult {
  bool feasible = false;
  VecX theta;
  MatX variable_matrix;
  std::vector<double> worst_eig_strict;
  std::vector<double> worst_eig_semidef;
  double min_eig_variable = 0.0;
  long iterations = 0;
  int restarts_used = 0;
  std::uint64_t seed = 0;
};

/// Subgradient feasibility search on φ(θ) = max over constraint blocks of
/// λmax, with the positivity constraint folded in as λmax(delta_p·I − V(θ)).
/// Polyak steps; trace(V) is held at dim(V) to remove the scaling ray.
/// "feasible" answers are re-checkable from theta; "infeasible" means budget
/// exhaustion across restarts (one-sided, no infeasibility proof).
LmiResult solve_feasibility(const LmiProblem& p, const LmiOptions& opts = {});

/// ε = min over strict blocks of −λmax(block(θ)), recomputed from scratch at
/// the returned θ. Throws StateError on an infeasible result.
double extract_margin(const LmiResult& r, const LmiProblem& p);

}  // namespace syncert
