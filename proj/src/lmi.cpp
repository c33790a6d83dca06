#include "syncert/lmi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "syncert/errors.hpp"
#include "syncert/rng.hpp"

namespace syncert {

VariableStructure VariableStructure::full_symmetric(int n) {
  if (n < 1) throw InputError("VariableStructure: n must be positive");
  return {VariableKind::full_symmetric, n, 0};
}

VariableStructure VariableStructure::diagonal(int n) {
  if (n < 1) throw InputError("VariableStructure: n must be positive");
  return {VariableKind::diagonal, n, 0};
}

VariableStructure VariableStructure::block_full_plus_scalars(int n, int l) {
  if (n < 1 || l < 0) throw InputError("VariableStructure: bad block sizes");
  return {VariableKind::block_full_plus_scalars, n, l};
}

int VariableStructure::dof() const {
  switch (kind) {
    case VariableKind::full_symmetric:          return n * (n + 1) / 2;
    case VariableKind::diagonal:                return n;
    case VariableKind::block_full_plus_scalars: return n * (n + 1) / 2 + l;
  }
  return 0;
}

int VariableStructure::dim() const {
  return kind == VariableKind::block_full_plus_scalars ? n + l : n;
}

namespace {

// dof_index -> (i, j) with i <= j for the row-major upper triangle
std::pair<int, int> upper_pair(int n, int dof_index) {
  int i = 0;
  int left = dof_index;
  int row_len = n;
  while (left >= row_len) {
    left -= row_len;
    ++i;
    --row_len;
  }
  return {i, i + left};
}

}  // namespace

MatX VariableStructure::basis(int dof_index) const {
  const int d = dim();
  MatX g = MatX::Zero(d, d);
  switch (kind) {
    case VariableKind::diagonal:
      g(dof_index, dof_index) = 1.0;
      break;
    case VariableKind::full_symmetric: {
      auto [i, j] = upper_pair(n, dof_index);
      g(i, j) = 1.0;
      g(j, i) = 1.0;
      break;
    }
    case VariableKind::block_full_plus_scalars: {
      const int nb = n * (n + 1) / 2;
      if (dof_index < nb) {
        auto [i, j] = upper_pair(n, dof_index);
        g(i, j) = 1.0;
        g(j, i) = 1.0;
      } else {
        const int q = n + (dof_index - nb);
        g(q, q) = 1.0;
      }
      break;
    }
  }
  return g;
}

MatX VariableStructure::assemble(const VecX& theta) const {
  if (theta.size() != dof()) throw InputError("assemble: theta size mismatch");
  const int d = dim();
  MatX v = MatX::Zero(d, d);
  for (int i = 0; i < dof(); ++i) {
    if (theta[i] != 0.0) v += theta[i] * basis(i);
  }
  return v;
}

bool VariableStructure::dof_on_diagonal(int dof_index) const {
  switch (kind) {
    case VariableKind::diagonal:
      return true;
    case VariableKind::full_symmetric: {
      auto [i, j] = upper_pair(n, dof_index);
      return i == j;
    }
    case VariableKind::block_full_plus_scalars: {
      const int nb = n * (n + 1) / 2;
      if (dof_index >= nb) return true;
      auto [i, j] = upper_pair(n, dof_index);
      return i == j;
    }
  }
  return false;
}

std::vector<int> VariableStructure::off_diagonal_dofs_of(int k) const {
  std::vector<int> out;
  if (kind == VariableKind::diagonal) return out;
  const int nb = n * (n + 1) / 2;
  for (int d = 0; d < nb; ++d) {
    auto [i, j] = upper_pair(n, d);
    if (i == j) continue;
    if (i == k || j == k) out.push_back(d);
  }
  return out;
}

AffineBlock sandwich_block(const VariableStructure& s, const MatX& m, std::string label) {
  if (m.rows() != s.dim() || m.cols() != s.dim()) {
    throw InputError("sandwich_block: matrix dimension does not match the variable");
  }
  AffineBlock b;
  b.constant = MatX::Zero(s.dim(), s.dim());
  b.coeff.reserve(s.dof());
  for (int i = 0; i < s.dof(); ++i) {
    const MatX g = s.basis(i);
    b.coeff.push_back(g * m + m.transpose() * g);
  }
  b.label = std::move(label);
  return b;
}

namespace {

struct BlockEval {
  double lambda_max = 0.0;
  VecX top_vec;
};

MatX eval_block(const AffineBlock& b, const VecX& theta) {
  MatX m = b.constant;
  for (int i = 0; i < theta.size(); ++i) {
    if (theta[i] != 0.0) m += theta[i] * b.coeff[i];
  }
  return m;
}

BlockEval eig_top(const MatX& m) {
  const EigenDecomposition e = sym_eigs(SymMatrix(m));
  const int d = static_cast<int>(m.rows());
  return {e.eigenvalues[d - 1], e.eigenvectors.col(d - 1)};
}

void validate(const LmiProblem& p) {
  const int dof = p.structure.dof();
  auto check = [&](const AffineBlock& b) {
    if (static_cast<int>(b.coeff.size()) != dof) {
      throw InputError("LmiProblem: block '" + b.label + "' has wrong coefficient count");
    }
    const Eigen::Index d = b.constant.rows();
    if (b.constant.cols() != d) throw InputError("LmiProblem: non-square block");
    for (const MatX& c : b.coeff) {
      if (c.rows() != d || c.cols() != d) {
        throw InputError("LmiProblem: block '" + b.label + "' has inconsistent dimensions");
      }
    }
  };
  for (const auto& b : p.strict_blocks) check(b);
  for (const auto& b : p.semidef_blocks) check(b);
  for (int z : p.zero_dofs) {
    if (z < 0 || z >= dof) throw InputError("LmiProblem: zero_dof index out of range");
  }
}

}  // namespace

LmiResult solve_feasibility(const LmiProblem& p, const LmiOptions& opts) {
  validate(p);
  const VariableStructure& s = p.structure;
  const int dof = s.dof();
  const int vdim = s.dim();

  std::vector<bool> pinned(dof, false);
  for (int z : p.zero_dofs) pinned[z] = true;

  std::vector<int> free_diag;
  for (int i = 0; i < dof; ++i) {
    if (!pinned[i] && s.dof_on_diagonal(i)) free_diag.push_back(i);
  }
  if (free_diag.empty()) {
    throw InputError("solve_feasibility: no free diagonal parameters to normalize");
  }

  std::vector<MatX> basis(dof);
  for (int i = 0; i < dof; ++i) basis[i] = s.basis(i);

  auto project = [&](VecX& theta) {
    for (int i = 0; i < dof; ++i) {
      if (pinned[i]) theta[i] = 0.0;
    }
    double trace = 0.0;
    for (int i = 0; i < dof; ++i) {
      if (s.dof_on_diagonal(i)) trace += theta[i];
    }
    const double shift = (vdim - trace) / static_cast<double>(free_diag.size());
    for (int i : free_diag) theta[i] += shift;
  };

  const int n_strict = static_cast<int>(p.strict_blocks.size());
  const int n_semidef = static_cast<int>(p.semidef_blocks.size());

  struct Snapshot {
    VecX theta;
    std::vector<double> strict_eigs;
    std::vector<double> semidef_eigs;
    double min_eig_variable = 0.0;
  };

  bool have_acc = false;
  Snapshot best_acc;
  double best_acc_value = std::numeric_limits<double>::infinity();  // max strict λmax

  Snapshot diag_best;  // best-φ iterate of the last restart, for diagnostics
  double diag_best_phi = std::numeric_limits<double>::infinity();

  long total_iters = 0;
  int restarts_used = 0;

  for (int restart = 0; restart < opts.restarts && !have_acc; ++restart) {
    restarts_used = restart + 1;
    SplitMix64 rng(mix_seed(opts.seed, static_cast<std::uint64_t>(restart)));

    VecX theta;
    if (opts.init_theta) {
      if (opts.init_theta->size() != dof) {
        throw InputError("solve_feasibility: init_theta size mismatch");
      }
      theta = *opts.init_theta;
    } else {
      theta = VecX::Zero(dof);
      for (int i = 0; i < dof; ++i) {
        if (s.dof_on_diagonal(i)) theta[i] = 1.0;
      }
    }
    if (restart > 0) {
      // diagonal entries explore scale multiplicatively (diagonal-stability
      // witnesses are often far from identity in scale), off-diagonals
      // additively; later restarts spread wider
      const double spread = 0.3 + 0.3 * restart;
      for (int i = 0; i < dof; ++i) {
        if (s.dof_on_diagonal(i)) {
          theta[i] *= std::exp(spread * rng.normal());
        } else {
          theta[i] += 0.3 * rng.normal();
        }
      }
    }
    project(theta);

    double best_phi = std::numeric_limits<double>::infinity();
    int stall = 0;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
      ++total_iters;

      // evaluate everything at theta
      std::vector<double> strict_eigs(n_strict);
      std::vector<double> semidef_eigs(n_semidef);
      double phi = -std::numeric_limits<double>::infinity();
      int arg_kind = -1;  // 0 strict, 1 semidef, 2 positivity
      int arg_index = -1;
      VecX arg_vec;

      for (int j = 0; j < n_strict; ++j) {
        const BlockEval be = eig_top(eval_block(p.strict_blocks[j], theta));
        strict_eigs[j] = be.lambda_max;
        if (be.lambda_max > phi) {
          phi = be.lambda_max;
          arg_kind = 0;
          arg_index = j;
          arg_vec = be.top_vec;
        }
      }
      for (int j = 0; j < n_semidef; ++j) {
        const BlockEval be = eig_top(eval_block(p.semidef_blocks[j], theta));
        semidef_eigs[j] = be.lambda_max;
        // satisfied semidef blocks sit exactly on their face (λmax ≈ 0 with a
        // vanishing subgradient over the free dofs); they drive the step only
        // while violated
        if (be.lambda_max > opts.semidef_tol && be.lambda_max > phi) {
          phi = be.lambda_max;
          arg_kind = 1;
          arg_index = j;
          arg_vec = be.top_vec;
        }
      }
      const MatX variable = s.assemble(theta);
      const EigenDecomposition veig = sym_eigs(SymMatrix(variable));
      const double vmin = veig.eigenvalues[0];
      if (p.delta_p - vmin > phi) {
        phi = p.delta_p - vmin;
        arg_kind = 2;
        arg_index = -1;
        arg_vec = veig.eigenvectors.col(0);
      }

      const bool acceptable =
          (n_strict == 0 ||
           *std::max_element(strict_eigs.begin(), strict_eigs.end()) <= -opts.delta_strict) &&
          (n_semidef == 0 ||
           *std::max_element(semidef_eigs.begin(), semidef_eigs.end()) <= opts.semidef_tol) &&
          vmin >= p.delta_p;

      if (acceptable) {
        const double value =
            n_strict == 0 ? 0.0 : *std::max_element(strict_eigs.begin(), strict_eigs.end());
        if (!have_acc || value < best_acc_value) {
          have_acc = true;
          best_acc_value = value;
          best_acc = {theta, strict_eigs, semidef_eigs, vmin};
        }
      }

      if (phi < best_phi - 1e-12 * std::max(1.0, std::abs(best_phi))) {
        best_phi = phi;
        stall = 0;
      } else {
        ++stall;
      }
      if (phi < diag_best_phi) {
        diag_best_phi = phi;
        diag_best = {theta, strict_eigs, semidef_eigs, vmin};
      }

      const int stall_limit = have_acc ? 500 : 1500;
      if (stall > stall_limit) break;

      // subgradient of the active term
      VecX g = VecX::Zero(dof);
      if (arg_kind == 0 || arg_kind == 1) {
        const AffineBlock& blk =
            arg_kind == 0 ? p.strict_blocks[arg_index] : p.semidef_blocks[arg_index];
        for (int i = 0; i < dof; ++i) {
          if (pinned[i]) continue;
          g[i] = arg_vec.dot(blk.coeff[i] * arg_vec);
        }
      } else {
        for (int i = 0; i < dof; ++i) {
          if (pinned[i]) continue;
          g[i] = -arg_vec.dot(basis[i] * arg_vec);
        }
      }
      // remove the trace direction so steps stay on the normalization slice
      double gsum = 0.0;
      for (int i : free_diag) gsum += g[i];
      const double gmean = gsum / static_cast<double>(free_diag.size());
      for (int i : free_diag) g[i] -= gmean;

      const double gnorm2 = g.squaredNorm();
      if (gnorm2 < 1e-24) break;

      const double target =
          std::min(-opts.delta_strict, 1.25 * std::min(best_phi, 0.0));
      const double step = (phi - target) / gnorm2;
      theta -= step * g;
      project(theta);
    }
  }

  LmiResult out;
  out.seed = opts.seed;
  out.iterations = total_iters;
  out.restarts_used = restarts_used;
  const Snapshot& snap = have_acc ? best_acc : diag_best;
  out.feasible = have_acc;
  out.theta = snap.theta;
  out.variable_matrix = s.assemble(snap.theta);
  out.worst_eig_strict = snap.strict_eigs;
  out.worst_eig_semidef = snap.semidef_eigs;
  out.min_eig_variable = snap.min_eig_variable;
  return out;
}

double extract_margin(const LmiResult& r, const LmiProblem& p) {
  if (!r.feasible) throw StateError("extract_margin: result is not feasible");
  if (p.strict_blocks.empty()) throw StateError("extract_margin: no strict blocks");
  double margin = std::numeric_limits<double>::infinity();
  for (const AffineBlock& b : p.strict_blocks) {
    const MatX m = eval_block(b, r.theta);
    const EigenDecomposition e = sym_eigs(SymMatrix(m));
    margin = std::min(margin, -e.eigenvalues[m.rows() - 1]);
  }
  return margin;
}

}  // namespace syncert
