#include "syncert/csv.hpp"

#include <cstdio>

namespace syncert {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, int num_compartments,
                          int state_dim, int stride) {
  os << "t";
  for (int i = 1; i <= num_compartments; ++i) {
    for (int k = 1; k <= state_dim; ++k) {
      os << ",x_" << i << "_" << k;
    }
  }
  os << "\n";
  const int samples = static_cast<int>(traj.states.size());
  for (int s = 0; s < samples; ++s) {
    if (s % stride != 0 && s != samples - 1) continue;
    os << format_g17(traj.times[s]);
    const VecX& x = traj.states[s];
    for (int c = 0; c < x.size(); ++c) os << "," << format_g17(x[c]);
    os << "\n";
  }
}

void write_metrics_csv(std::ostream& os, const SyncMetrics& metrics) {
  os << "t,sync_error\n";
  for (int s = 0; s < metrics.error_norm.size(); ++s) {
    os << format_g17(metrics.times[s]) << "," << format_g17(metrics.error_norm[s]) << "\n";
  }
}

void write_field_csv(std::ostream& os, const PdeRun& run, const PdeGrid& grid) {
  os << "t,xi,component,value\n";
  for (int s = 0; s < static_cast<int>(run.snapshots.size()); ++s) {
    const MatX& f = run.snapshots[s];
    for (int k = 0; k < f.rows(); ++k) {
      for (int m = 0; m < f.cols(); ++m) {
        os << format_g17(run.snapshot_times[s]) << "," << format_g17(grid.center(m)) << ","
           << (k + 1) << "," << format_g17(f(k, m)) << "\n";
      }
    }
  }
}

void write_pi_norm_csv(std::ostream& os, const PdeRun& run) {
  os << "t,pi_l2\n";
  for (int s = 0; s < run.pi_norm.size(); ++s) {
    os << format_g17(run.metric_times[s]) << "," << format_g17(run.pi_norm[s]) << "\n";
  }
}

}  // namespace syncert
