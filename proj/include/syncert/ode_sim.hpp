#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "syncert/cert.hpp"
#include "syncert/graph.hpp"
#include "syncert/types.hpp"

namespace syncert {

/// N compartments, each carrying an n-dimensional state coupled component-wise
/// through per-component Laplacians.
struct NetworkModel {
  int num_compartments = 0;  // N
  int state_dim = 0;         // n
  std::function<VecX(const VecX&)> f;    // per-compartment vector field
  std::function<MatX(const VecX&)> jac;  // per-compartment Jacobian
  std::vector<LaplacianMatrix> laplacians;  // one per component, N×N

  VecX lambda2s() const;
};

struct StateBox {
  VecX lo;
  VecX hi;
};

struct OdeSimOptions {
  /// Optional per-compartment state box; leaving it is reported, not enforced.
  std::optional<StateBox> state_box;
};

struct Trajectory {
  VecX times;
  std::vector<VecX> states;  // stacked [x_1ᵀ … x_Nᵀ]ᵀ per sample
  std::optional<double> box_exit_time;
};

/// Coupling term (Σ_k L_k ⊗ E_k)·x on a stacked state.
VecX coupling_term(const NetworkModel& model, const VecX& x);

/// Classical fixed-step RK4 on Ẋ = F(X) − (Σ L_k ⊗ E_k)X, sampled every step.
/// Throws DivergenceError with the blow-up time on non-finite states.
Trajectory simulate(const NetworkModel& model, const VecX& x0, double t_end, double dt,
                    const OdeSimOptions& opts = {});

struct SyncMetrics {
  VecX times;
  VecX error_norm;  // ‖X − 1_N ⊗ x̄‖ per sample
  double fitted_rate = std::numeric_limits<double>::quiet_NaN();
  double predicted_rate = std::numeric_limits<double>::quiet_NaN();
  int fit_begin = 0;  // [fit_begin, fit_end) sample range used by the fit
  int fit_end = 0;
  bool floored = false;     // error dipped below 1e-14; fit used the prefix
  bool fit_valid = false;
};

SyncMetrics sync_error(const Trajectory& traj, int num_compartments, int state_dim);

/// Least-squares slope of log(error) over the trailing window_fraction of
/// samples with error > 1e-12, truncated before the first sample under 1e-14.
/// Returns the rate (−slope) and records the window in the metrics.
double fit_decay_rate(SyncMetrics& metrics, double window_fraction = 0.6);

/// Guaranteed exponential rate for ‖X̃‖: ε / (2·λmax(P)).
double predicted_rate(const Certificate& cert);

}  // namespace syncert
