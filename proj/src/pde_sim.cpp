#include "syncert/pde_sim.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "syncert/errors.hpp"
#include "syncert/rng.hpp"

namespace syncert {

PdeGrid::PdeGrid(double length_, int cells_) : length(length_), cells(cells_) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InputError("PdeGrid: domain length must be positive");
  }
  if (cells < 3) throw InputError("PdeGrid: need at least three cells");
  h = length / cells;
}

DiffusionProfile::DiffusionProfile(std::vector<VecX> coeffs, double alpha_, int cells)
    : face_coeffs(std::move(coeffs)), alpha(alpha_) {
  if (face_coeffs.empty()) throw InputError("DiffusionProfile: need at least one component");
  if (!(alpha > 0.0)) throw InputError("DiffusionProfile: ellipticity floor must be positive");
  for (const VecX& a : face_coeffs) {
    if (a.size() != cells + 1) {
      throw InputError("DiffusionProfile: need cells+1 face samples per component");
    }
    if (!a.allFinite()) throw InputError("DiffusionProfile: non-finite coefficient");
    for (int j = 1; j < cells; ++j) {
      if (a[j] < alpha) {
        throw InputError("DiffusionProfile: interior face coefficient below the floor at face " +
                         std::to_string(j));
      }
    }
  }
}

double DiffusionProfile::max_interior_coeff() const {
  double m = 0.0;
  for (const VecX& a : face_coeffs) {
    for (int j = 1; j + 1 < static_cast<int>(a.size()); ++j) m = std::max(m, a[j]);
  }
  return m;
}

DiffusionProfile profile_from_functions(const PdeGrid& grid,
                                        const std::vector<std::function<double(double)>>& a,
                                        double alpha) {
  std::vector<VecX> coeffs;
  coeffs.reserve(a.size());
  for (const auto& fn : a) {
    VecX c(grid.cells + 1);
    for (int j = 0; j <= grid.cells; ++j) c[j] = fn(grid.face(j));
    coeffs.push_back(std::move(c));
  }
  return DiffusionProfile(std::move(coeffs), alpha, grid.cells);
}

DiscreteOperator discretize_operator(const PdeGrid& grid, const DiffusionProfile& prof,
                                     int component) {
  if (component < 0 || component >= prof.components()) {
    throw InputError("discretize_operator: component index out of range");
  }
  const int M = grid.cells;
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  const VecX& a = prof.face_coeffs[component];

  MatX l = MatX::Zero(M, M);
  for (int j = 1; j < M; ++j) {  // interior faces carry the fluxes; boundary fluxes are zero
    const double c = a[j] * inv_h2;
    l(j - 1, j - 1) -= c;
    l(j, j) -= c;
    l(j - 1, j) += c;
    l(j, j - 1) += c;
  }

  DiscreteOperator op;
  op.matrix = std::move(l);
  op.component = component;
  const EigenDecomposition eig = sym_eigs(SymMatrix(MatX(-op.matrix)));
  op.lambda2 = eig.eigenvalues[1];
  return op;
}

double neumann_lambda2(const DiscreteOperator& op) { return op.lambda2; }

double check_lemma1(const DiscreteOperator& op, int trials, std::uint64_t seed) {
  const int M = static_cast<int>(op.matrix.rows());
  if (!(op.lambda2 > 0.0)) {
    throw InputError("check_lemma1: operator has no positive second eigenvalue");
  }
  SplitMix64 rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  VecX v(M);
  for (int t = 0; t < trials; ++t) {
    for (int m = 0; m < M; ++m) v[m] = rng.uniform(-1.0, 1.0);
    v.array() -= v.mean();
    const double nn = v.squaredNorm();
    if (nn < 1e-20) continue;
    const double dirichlet = -v.dot(op.matrix * v);
    worst = std::min(worst, dirichlet / (op.lambda2 * nn));
  }
  return worst;
}

MatX pi_projection(const MatX& field, const PdeGrid& grid) {
  if (field.cols() != grid.cells) throw InputError("pi_projection: field does not match the grid");
  MatX out = field;
  for (int k = 0; k < field.rows(); ++k) {
    out.row(k).array() -= field.row(k).mean();
  }
  return out;
}

double l2_norm(const MatX& field, const PdeGrid& grid) {
  if (field.cols() != grid.cells) throw InputError("l2_norm: field does not match the grid");
  return std::sqrt(grid.h * field.squaredNorm());
}

double max_stable_dt(const PdeGrid& grid, const DiffusionProfile& prof) {
  const double amax = prof.max_interior_coeff();
  if (amax == 0.0) return std::numeric_limits<double>::infinity();
  return 0.9 * grid.h * grid.h / (2.0 * amax);
}

PdeRun simulate_pde(const PdeGrid& grid, const DiffusionProfile& prof,
                    const FieldReaction& reaction, const MatX& x0, double t_end, double dt,
                    int snapshot_stride, int metric_stride) {
  const int n = prof.components();
  const int M = grid.cells;
  if (x0.rows() != n || x0.cols() != M || !x0.allFinite()) {
    throw InputError("simulate_pde: initial field must be components x cells and finite");
  }
  if (!(dt > 0.0)) throw InputError("simulate_pde: dt must be positive");
  const double dt_max = max_stable_dt(grid, prof);
  if (dt > dt_max) {
    throw InputError("simulate_pde: dt = " + std::to_string(dt) +
                     " violates the explicit stability bound; max admissible dt = " +
                     std::to_string(dt_max));
  }
  if (!(t_end >= dt)) throw InputError("simulate_pde: t_end must be at least dt");
  if (metric_stride < 1) throw InputError("simulate_pde: metric stride must be >= 1");
  if (snapshot_stride < 0) throw InputError("simulate_pde: snapshot stride must be >= 0");

  std::vector<DiscreteOperator> ops;
  ops.reserve(n);
  for (int k = 0; k < n; ++k) ops.push_back(discretize_operator(grid, prof, k));

  auto rhs = [&](const MatX& x) {
    MatX d = reaction(x);
    for (int k = 0; k < n; ++k) {
      d.row(k) += (ops[k].matrix * x.row(k).transpose()).transpose();
    }
    return d;
  };

  const int steps = static_cast<int>(std::ceil(t_end / dt - 1e-12));
  PdeRun run;
  std::vector<double> snap_times;
  std::vector<double> metric_times;
  std::vector<double> pi_norms;
  std::vector<VecX> means;

  MatX x = x0;
  auto record_metrics = [&](double t) {
    metric_times.push_back(t);
    pi_norms.push_back(l2_norm(pi_projection(x, grid), grid));
    VecX mean(n);
    for (int k = 0; k < n; ++k) mean[k] = x.row(k).mean();
    means.push_back(mean);
  };
  auto record_snapshot = [&](double t) {
    snap_times.push_back(t);
    run.snapshots.push_back(x);
  };

  record_metrics(0.0);
  record_snapshot(0.0);

  for (int s = 0; s < steps; ++s) {
    const MatX k1 = rhs(x);
    const MatX k2 = rhs(x + 0.5 * dt * k1);
    const MatX k3 = rhs(x + 0.5 * dt * k2);
    const MatX k4 = rhs(x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t_next = (s + 1) * dt;
    if (!x.allFinite()) {
      throw DivergenceError(
          "simulate_pde: field became non-finite at t = " + std::to_string(t_next), t_next);
    }
    if ((s + 1) % metric_stride == 0 || s + 1 == steps) record_metrics(t_next);
    if ((snapshot_stride > 0 && (s + 1) % snapshot_stride == 0) || s + 1 == steps) {
      record_snapshot(t_next);
    }
  }

  run.snapshot_times = Eigen::Map<const VecX>(snap_times.data(), snap_times.size());
  run.metric_times = Eigen::Map<const VecX>(metric_times.data(), metric_times.size());
  run.pi_norm = Eigen::Map<const VecX>(pi_norms.data(), pi_norms.size());
  run.component_means.resize(static_cast<int>(means.size()), n);
  for (int i = 0; i < static_cast<int>(means.size()); ++i) {
    run.component_means.row(i) = means[i].transpose();
  }
  return run;
}

}  // namespace syncert
