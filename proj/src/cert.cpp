#include "syncert/cert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "syncert/errors.hpp"
#include "syncert/rng.hpp"

namespace syncert {

CouplingSpec CouplingSpec::none(int n) {
  return {std::vector<bool>(n, false), std::vector<bool>(n, false)};
}

CouplingSpec CouplingSpec::all(int n) {
  return {std::vector<bool>(n, true), std::vector<bool>(n, false)};
}

MatX reduced_matrix(const MatX& z, const VecX& lambda2s) {
  if (z.rows() != z.cols()) throw InputError("reduced_matrix: matrix must be square");
  if (lambda2s.size() != z.rows()) {
    throw InputError("reduced_matrix: lambda2 vector length mismatch");
  }
  MatX out = z;
  out.diagonal() -= lambda2s;
  return out;
}

MatX augmented_box_matrix(const BoxBound& b, const VecX& lambda2s) {
  const int n = static_cast<int>(b.base.rows());
  const int l = static_cast<int>(b.terms.size());
  if (b.base.cols() != n) throw InputError("augmented_box_matrix: base must be square");
  for (const RankOneTerm& t : b.terms) {
    if (t.left.size() != n || t.right.size() != n) {
      throw InputError("augmented_box_matrix: rank-one factors must have length n");
    }
  }
  MatX m = MatX::Zero(n + l, n + l);
  m.topLeftCorner(n, n) = reduced_matrix(b.base, lambda2s);
  for (int i = 0; i < l; ++i) {
    m.col(n + i).head(n) = b.terms[i].left;
    m.row(n + i).head(n) = b.terms[i].right.transpose();
  }
  m.bottomRightCorner(l, l) = -MatX::Identity(l, l);
  return m;
}

HullConeBound hull_from_box(const BoxBound& b) {
  const int l = static_cast<int>(b.terms.size());
  if (l > 12) {
    throw InputError("hull_from_box: " + std::to_string(l) +
                     " rank-one terms would need 2^" + std::to_string(l) +
                     " vertices; use the box method");
  }
  HullConeBound out;
  out.vertices.reserve(std::size_t{1} << l);
  for (std::uint32_t mask = 0; mask < (1u << l); ++mask) {
    MatX v = b.base;
    for (int i = 0; i < l; ++i) {
      if (mask >> i & 1u) v += b.terms[i].left * b.terms[i].right.transpose();
    }
    out.vertices.push_back(std::move(v));
  }
  return out;
}

namespace {

void validate_coupling(const CouplingSpec& c, int n) {
  if (static_cast<int>(c.coupled.size()) != n || static_cast<int>(c.nonsymmetric.size()) != n) {
    throw InputError("CouplingSpec: size does not match the component count");
  }
}

std::vector<int> restricted_components(const CouplingSpec& c) {
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(c.coupled.size()); ++k) {
    if (c.coupled[k] || c.nonsymmetric[k]) out.push_back(k);
  }
  return out;
}

/// −(P·Ek + Ek·P) on the n×n P block of the variable.
AffineBlock commutation_block(const VariableStructure& s, int n, int k) {
  AffineBlock b;
  b.constant = MatX::Zero(n, n);
  b.label = "commutation k=" + std::to_string(k + 1);
  const VariableStructure pblock = VariableStructure::full_symmetric(n);
  const int nb = pblock.dof();
  for (int i = 0; i < s.dof(); ++i) {
    if (i < nb && s.kind != VariableKind::diagonal) {
      const MatX g = pblock.basis(i);
      MatX c = MatX::Zero(n, n);
      c.col(k) -= g.col(k);
      c.row(k) -= g.col(k).transpose();
      b.coeff.push_back(std::move(c));
    } else if (s.kind == VariableKind::diagonal && i < n) {
      MatX c = MatX::Zero(n, n);
      if (i == k) c(k, k) = -2.0;
      b.coeff.push_back(std::move(c));
    } else {
      b.coeff.push_back(MatX::Zero(n, n));
    }
  }
  return b;
}

std::vector<double> commutation_residuals_for(const SymMatrix& p, const CouplingSpec& coupling) {
  std::vector<double> out;
  for (int k = 0; k < p.dim(); ++k) {
    if (!coupling.coupled[k] && !coupling.nonsymmetric[k]) continue;
    const MatX prod = 2.0 * half_sym_product(p, k);
    out.push_back(sym_eigs(SymMatrix(prod)).eigenvalues[0]);
  }
  return out;
}

/// Uniform ω-samples of the box, re-checked against −ε.
bool box_samples_verify(const BoxBound& bound, const VecX& lambda2s, const SymMatrix& p,
                        double epsilon, std::uint64_t seed) {
  const int l = static_cast<int>(bound.terms.size());
  SplitMix64 rng(mix_seed(seed, 0xB0F1ull));
  for (int trial = 0; trial < 100; ++trial) {
    MatX j = bound.base;
    for (int i = 0; i < l; ++i) {
      j += rng.uniform01() * bound.terms[i].left * bound.terms[i].right.transpose();
    }
    const MatX red = reduced_matrix(j, lambda2s);
    const MatX q = p.mat() * red + red.transpose() * p.mat();
    const double lmax = sym_eigs(SymMatrix(q)).eigenvalues[p.dim() - 1];
    if (lmax > -epsilon + 1e-6) return false;
  }
  return true;
}

std::string budget_reason(const LmiResult& r) {
  return "LMI budget exhausted (" + std::to_string(r.restarts_used) + " restarts, " +
         std::to_string(r.iterations) + " iterations)";
}

/// Diagonal warm start from similarity balancing of m: scale factors s_i that
/// equalize the off-diagonal row and column 1-norms of diag(s)·m·diag(s)⁻¹.
/// diag(s²)·m + mᵀ·diag(s²) is congruent to the symmetric part of the balanced
/// similarity, which for cyclic matrices is the sharpest diagonal witness.
VecX balanced_diag_init(const VariableStructure& s, const MatX& m) {
  const int d = s.dim();
  VecX scale = VecX::Ones(d);
  for (int sweep = 0; sweep < 20; ++sweep) {
    for (int i = 0; i < d; ++i) {
      double row = 0.0;
      double col = 0.0;
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        row += std::abs(scale[i] * m(i, j) / scale[j]);
        col += std::abs(scale[j] * m(j, i) / scale[i]);
      }
      if (row > 1e-300 && col > 1e-300) scale[i] *= std::sqrt(std::sqrt(col / row));
    }
  }
  VecX diag = scale.array().square();
  diag *= d / diag.sum();
  VecX theta = VecX::Zero(s.dof());
  int next = 0;
  for (int i = 0; i < s.dof(); ++i) {
    if (s.dof_on_diagonal(i)) theta[i] = diag[next++];
  }
  return theta;
}

}  // namespace

CertifyResult certify_hull_cone(const HullConeBound& bound, const VecX& lambda2s,
                                const CouplingSpec& coupling, const LmiOptions& opts) {
  if (bound.vertices.empty()) {
    throw InputError("certify_hull_cone: hull needs at least one vertex");
  }
  const int n = static_cast<int>(bound.vertices[0].rows());
  validate_coupling(coupling, n);

  LmiProblem prob;
  prob.structure = VariableStructure::full_symmetric(n);
  for (std::size_t v = 0; v < bound.vertices.size(); ++v) {
    const MatX& z = bound.vertices[v];
    if (z.rows() != n || z.cols() != n) throw InputError("certify_hull_cone: vertex size mismatch");
    prob.strict_blocks.push_back(
        sandwich_block(prob.structure, reduced_matrix(z, lambda2s), "vertex " + std::to_string(v)));
  }
  for (std::size_t c = 0; c < bound.cone_generators.size(); ++c) {
    const MatX& s = bound.cone_generators[c];
    if (s.rows() != n || s.cols() != n) throw InputError("certify_hull_cone: cone size mismatch");
    prob.semidef_blocks.push_back(sandwich_block(prob.structure, s, "cone " + std::to_string(c)));
  }
  for (int k : restricted_components(coupling)) {
    prob.semidef_blocks.push_back(commutation_block(prob.structure, n, k));
    for (int d : prob.structure.off_diagonal_dofs_of(k)) prob.zero_dofs.push_back(d);
  }
  std::sort(prob.zero_dofs.begin(), prob.zero_dofs.end());
  prob.zero_dofs.erase(std::unique(prob.zero_dofs.begin(), prob.zero_dofs.end()),
                       prob.zero_dofs.end());

  CertifyResult out;
  out.solver = solve_feasibility(prob, opts);
  if (!out.solver.feasible) {
    out.failure_reason = budget_reason(out.solver);
    return out;
  }

  SymMatrix p(out.solver.variable_matrix);
  Certificate cert{p,
                   extract_margin(out.solver, prob),
                   lambda2s,
                   CertMethod::hull_cone,
                   out.solver.worst_eig_strict,
                   commutation_residuals_for(p, coupling),
                   std::vector<bool>(n, false)};
  for (int k : restricted_components(coupling)) cert.commutation_checked[k] = true;
  out.certificate = std::move(cert);
  return out;
}

CertifyResult certify_box(const BoxBound& bound, const VecX& lambda2s,
                          const CouplingSpec& coupling, const LmiOptions& opts) {
  const int n = static_cast<int>(bound.base.rows());
  const int l = static_cast<int>(bound.terms.size());
  validate_coupling(coupling, n);

  if (l == 0) {
    HullConeBound single;
    single.vertices.push_back(bound.base);
    CertifyResult out = certify_hull_cone(single, lambda2s, coupling, opts);
    if (out.certificate) out.certificate->method = CertMethod::box;
    return out;
  }

  LmiProblem prob;
  prob.structure = VariableStructure::block_full_plus_scalars(n, l);
  const MatX m = augmented_box_matrix(bound, lambda2s);
  prob.strict_blocks.push_back(sandwich_block(prob.structure, m, "augmented box"));
  for (int k : restricted_components(coupling)) {
    prob.semidef_blocks.push_back(commutation_block(prob.structure, n, k));
    for (int d : prob.structure.off_diagonal_dofs_of(k)) prob.zero_dofs.push_back(d);
  }
  std::sort(prob.zero_dofs.begin(), prob.zero_dofs.end());
  prob.zero_dofs.erase(std::unique(prob.zero_dofs.begin(), prob.zero_dofs.end()),
                       prob.zero_dofs.end());

  LmiOptions warm = opts;
  if (!warm.init_theta) warm.init_theta = balanced_diag_init(prob.structure, m);

  CertifyResult out;
  out.solver = solve_feasibility(prob, warm);
  if (!out.solver.feasible) {
    out.failure_reason = budget_reason(out.solver);
    return out;
  }

  SymMatrix p(MatX(out.solver.variable_matrix.topLeftCorner(n, n)));
  const double epsilon = extract_margin(out.solver, prob);
  if (!box_samples_verify(bound, lambda2s, p, epsilon, opts.seed)) {
    out.failure_reason = "box sample re-verification failed";
    return out;
  }

  Certificate cert{p,
                   epsilon,
                   lambda2s,
                   CertMethod::box,
                   out.solver.worst_eig_strict,
                   commutation_residuals_for(p, coupling),
                   std::vector<bool>(n, false)};
  for (int k : restricted_components(coupling)) cert.commutation_checked[k] = true;
  out.certificate = std::move(cert);
  return out;
}

CertifyResult certify_secant_diagonal(const BoxBound& bound, const VecX& lambda2s,
                                      const CouplingSpec& coupling, const LmiOptions& opts) {
  const int n = static_cast<int>(bound.base.rows());
  const int l = static_cast<int>(bound.terms.size());
  validate_coupling(coupling, n);

  const MatX m = augmented_box_matrix(bound, lambda2s);
  const std::optional<CyclicForm> cyc = cyclic_permutation(m);
  CertifyResult out;
  if (!cyc) {
    out.failure_reason = "augmented matrix admits no cyclic permutation";
    return out;
  }

  LmiProblem prob;
  prob.structure = VariableStructure::diagonal(n + l);
  prob.strict_blocks.push_back(sandwich_block(prob.structure, cyc->mtilde, "cyclic form"));

  LmiOptions warm = opts;
  if (!warm.init_theta) warm.init_theta = balanced_diag_init(prob.structure, cyc->mtilde);

  out.solver = solve_feasibility(prob, warm);
  if (!out.solver.feasible) {
    out.failure_reason = budget_reason(out.solver);
    return out;
  }

  const VecX ptilde = out.solver.variable_matrix.diagonal();
  const VecX pdiag = diagonal_stability_transfer(cyc->perm, ptilde);
  const MatX script_p = pdiag.asDiagonal();
  const MatX q = script_p * m + m.transpose() * script_p;
  const double lmax = sym_eigs(SymMatrix(q)).eigenvalues[n + l - 1];
  if (lmax >= 0.0) {
    out.failure_reason = "transferred diagonal failed re-verification";
    return out;
  }
  const double epsilon = -lmax;

  SymMatrix p(MatX(pdiag.head(n).asDiagonal()));
  if (!box_samples_verify(bound, lambda2s, p, epsilon, opts.seed)) {
    out.failure_reason = "box sample re-verification failed";
    return out;
  }

  Certificate cert{p,
                   epsilon,
                   lambda2s,
                   CertMethod::secant_diagonal,
                   {lmax},
                   commutation_residuals_for(p, coupling),
                   std::vector<bool>(n, false)};
  for (int k : restricted_components(coupling)) cert.commutation_checked[k] = true;
  out.certificate = std::move(cert);
  return out;
}

SecantResult secant_criterion(const VecX& etas, const VecX& alphabetas, const VecX& lambda2s) {
  const int n = static_cast<int>(etas.size());
  if (n < 3) throw InputError("secant_criterion: need at least three stages");
  if (alphabetas.size() != n || lambda2s.size() != n) {
    throw InputError("secant_criterion: vector length mismatch");
  }
  double ratio = 1.0;
  for (int k = 0; k < n; ++k) {
    if (!(alphabetas[k] > 0.0)) {
      throw InputError("secant_criterion: gain products must be positive");
    }
    const double denom = etas[k] + lambda2s[k];
    if (!(denom > 0.0)) {
      throw InputError("secant_criterion: eta + lambda2 must be positive for every stage");
    }
    ratio *= alphabetas[k] / denom;
  }
  const double pi = 3.14159265358979323846264338327950288;
  const double threshold = std::pow(1.0 / std::cos(pi / n), n);
  return {ratio < threshold, ratio, threshold};
}

namespace {

bool cyclic_backtrack(const MatX& m, std::vector<int>& sigma, std::vector<bool>& used, int pos) {
  const int d = static_cast<int>(m.rows());
  if (pos == d) {
    // wrap-around entries not covered by prefix checks
    if (d > 2 && m(sigma[d - 1], sigma[0]) != 0.0) return false;
    return true;
  }
  for (int cand = 0; cand < d; ++cand) {
    if (used[cand]) continue;
    bool ok = true;
    for (int b = 0; b < pos && ok; ++b) {
      // entry (pos, b): only the (a, a-1) band may be nonzero
      if (m(cand, sigma[b]) != 0.0 && b != pos - 1) ok = false;
      // entry (b, pos): only the (0, d-1) corner may be nonzero
      if (ok && m(sigma[b], cand) != 0.0 && !(b == 0 && pos == d - 1)) ok = false;
    }
    if (!ok) continue;
    sigma[pos] = cand;
    used[cand] = true;
    if (cyclic_backtrack(m, sigma, used, pos + 1)) return true;
    used[cand] = false;
  }
  return false;
}

}  // namespace

std::optional<CyclicForm> cyclic_permutation(const MatX& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InputError("cyclic_permutation: matrix must be square");
  }
  const int d = static_cast<int>(m.rows());
  std::vector<int> sigma(d, -1);
  std::vector<bool> used(d, false);
  if (!cyclic_backtrack(m, sigma, used, 0)) return std::nullopt;

  CyclicForm out;
  out.perm = sigma;
  out.mtilde.resize(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) out.mtilde(a, b) = m(sigma[a], sigma[b]);
  }
  return out;
}

VecX diagonal_stability_transfer(const std::vector<int>& perm, const VecX& ptilde_diag) {
  const int d = static_cast<int>(perm.size());
  if (ptilde_diag.size() != d) {
    throw InputError("diagonal_stability_transfer: size mismatch");
  }
  for (int a = 0; a < d; ++a) {
    if (!(ptilde_diag[a] > 0.0)) {
      throw InputError("diagonal_stability_transfer: diagonal must be positive");
    }
  }
  VecX out(d);
  for (int a = 0; a < d; ++a) out[perm[a]] = ptilde_diag[a];
  return out;
}

}  // namespace syncert
