#pragma once

#include <ostream>
#include <string>

#include "syncert/ode_sim.hpp"
#include "syncert/pde_sim.hpp"

namespace syncert {

/// 17 significant digits; round-trips doubles exactly.
std::string format_g17(double v);

/// Header t,x_1_1,…,x_N_n; one row per retained sample.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, int num_compartments,
                          int state_dim, int stride);

/// Header t,sync_error.
void write_metrics_csv(std::ostream& os, const SyncMetrics& metrics);

/// Header t,xi,component,value (component 1-based).
void write_field_csv(std::ostream& os, const PdeRun& run, const PdeGrid& grid);

/// Header t,pi_l2.
void write_pi_norm_csv(std::ostream& os, const PdeRun& run);

}  // namespace syncert
