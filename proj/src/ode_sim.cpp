#include "syncert/ode_sim.hpp"

#include <cmath>
#include <string>

#include "syncert/errors.hpp"

namespace syncert {

VecX NetworkModel::lambda2s() const {
  VecX out(static_cast<int>(laplacians.size()));
  for (int k = 0; k < out.size(); ++k) out[k] = laplacians[k].lambda2;
  return out;
}

VecX coupling_term(const NetworkModel& model, const VecX& x) {
  const int N = model.num_compartments;
  const int n = model.state_dim;
  VecX out = VecX::Zero(N * n);
  VecX comp(N);
  for (int k = 0; k < n; ++k) {
    if (model.laplacians[k].matrix.isZero(0.0)) continue;
    for (int i = 0; i < N; ++i) comp[i] = x[i * n + k];
    const VecX mixed = model.laplacians[k].matrix * comp;
    for (int i = 0; i < N; ++i) out[i * n + k] = mixed[i];
  }
  return out;
}

namespace {

VecX network_rhs(const NetworkModel& model, const VecX& x) {
  const int N = model.num_compartments;
  const int n = model.state_dim;
  VecX out(N * n);
  for (int i = 0; i < N; ++i) {
    out.segment(i * n, n) = model.f(x.segment(i * n, n));
  }
  out -= coupling_term(model, x);
  return out;
}

bool inside_box(const StateBox& box, const VecX& x, int N, int n) {
  for (int i = 0; i < N; ++i) {
    for (int k = 0; k < n; ++k) {
      const double v = x[i * n + k];
      if (v < box.lo[k] || v > box.hi[k]) return false;
    }
  }
  return true;
}

}  // namespace

Trajectory simulate(const NetworkModel& model, const VecX& x0, double t_end, double dt,
                    const OdeSimOptions& opts) {
  const int N = model.num_compartments;
  const int n = model.state_dim;
  if (!(dt > 0.0) || !(t_end >= dt)) {
    throw InputError("simulate: need dt > 0 and t_end >= dt");
  }
  if (x0.size() != N * n || !x0.allFinite()) {
    throw InputError("simulate: initial state has wrong size or non-finite entries");
  }
  if (static_cast<int>(model.laplacians.size()) != n) {
    throw InputError("simulate: model needs one Laplacian per component");
  }
  for (const LaplacianMatrix& l : model.laplacians) {
    if (l.matrix.rows() != N || l.matrix.cols() != N) {
      throw InputError("simulate: Laplacian size does not match the compartment count");
    }
  }
  if (opts.state_box && (opts.state_box->lo.size() != n || opts.state_box->hi.size() != n)) {
    throw InputError("simulate: state box bounds must have length n");
  }

  const int steps = static_cast<int>(std::ceil(t_end / dt - 1e-12));
  Trajectory traj;
  traj.times.resize(steps + 1);
  traj.states.reserve(steps + 1);

  VecX x = x0;
  traj.times[0] = 0.0;
  traj.states.push_back(x);
  if (opts.state_box && !inside_box(*opts.state_box, x, N, n)) {
    traj.box_exit_time = 0.0;
  }

  for (int s = 0; s < steps; ++s) {
    const VecX k1 = network_rhs(model, x);
    const VecX k2 = network_rhs(model, x + 0.5 * dt * k1);
    const VecX k3 = network_rhs(model, x + 0.5 * dt * k2);
    const VecX k4 = network_rhs(model, x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t_next = (s + 1) * dt;
    if (!x.allFinite()) {
      throw DivergenceError("simulate: state became non-finite at t = " + std::to_string(t_next),
                            t_next);
    }
    traj.times[s + 1] = t_next;
    traj.states.push_back(x);
    if (!traj.box_exit_time && opts.state_box && !inside_box(*opts.state_box, x, N, n)) {
      traj.box_exit_time = t_next;
    }
  }
  return traj;
}

SyncMetrics sync_error(const Trajectory& traj, int num_compartments, int state_dim) {
  const int N = num_compartments;
  const int n = state_dim;
  const int samples = static_cast<int>(traj.states.size());
  if (samples == 0 || traj.states[0].size() != N * n) {
    throw InputError("sync_error: trajectory does not match N and n");
  }
  SyncMetrics m;
  m.times = traj.times;
  m.error_norm.resize(samples);
  VecX mean(n);
  for (int s = 0; s < samples; ++s) {
    const VecX& x = traj.states[s];
    mean.setZero();
    for (int i = 0; i < N; ++i) mean += x.segment(i * n, n);
    mean /= static_cast<double>(N);
    double sq = 0.0;
    for (int i = 0; i < N; ++i) {
      sq += (x.segment(i * n, n) - mean).squaredNorm();
    }
    m.error_norm[s] = std::sqrt(sq);
  }
  return m;
}

double fit_decay_rate(SyncMetrics& metrics, double window_fraction) {
  if (!(window_fraction > 0.0) || window_fraction > 1.0) {
    throw InputError("fit_decay_rate: window fraction must lie in (0, 1]");
  }
  const int samples = static_cast<int>(metrics.error_norm.size());

  // usable prefix: stop before the error hits the floating-point floor
  int usable = samples;
  for (int s = 0; s < samples; ++s) {
    if (metrics.error_norm[s] < 1e-14) {
      usable = s;
      metrics.floored = true;
      break;
    }
  }

  std::vector<int> eligible;
  for (int s = 0; s < usable; ++s) {
    if (metrics.error_norm[s] > 1e-12) eligible.push_back(s);
  }
  if (eligible.size() < 2) {
    metrics.fit_valid = false;
    metrics.fitted_rate = std::numeric_limits<double>::quiet_NaN();
    return metrics.fitted_rate;
  }

  const int start = static_cast<int>(std::floor(eligible.size() * (1.0 - window_fraction)));
  const int count = static_cast<int>(eligible.size()) - start;
  metrics.fit_begin = eligible[start];
  metrics.fit_end = eligible.back() + 1;

  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (int idx = start; idx < static_cast<int>(eligible.size()); ++idx) {
    const int s = eligible[idx];
    const double t = metrics.times[s];
    const double y = std::log(metrics.error_norm[s]);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double denom = count * stt - st * st;
  if (std::abs(denom) < 1e-300) {
    metrics.fit_valid = false;
    metrics.fitted_rate = std::numeric_limits<double>::quiet_NaN();
    return metrics.fitted_rate;
  }
  const double slope = (count * sty - st * sy) / denom;
  metrics.fitted_rate = -slope;
  metrics.fit_valid = true;
  return metrics.fitted_rate;
}

double predicted_rate(const Certificate& cert) {
  const EigenDecomposition eig = sym_eigs(cert.P);
  const double lmax = eig.eigenvalues[cert.P.dim() - 1];
  return cert.epsilon / (2.0 * lmax);
}

}  // namespace syncert
