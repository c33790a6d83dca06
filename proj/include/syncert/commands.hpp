#pragma once

#include <string>

#include "syncert/config.hpp"

namespace syncert {

// Exit codes: 0 success/feasible, 1 usage or config error (thrown as
// InputError), 2 infeasible, 3 divergence (thrown as DivergenceError).
int run_certify(const Json& config, const std::string& out_dir);
int run_simulate_ode(const Json& config, const std::string& out_dir);
int run_simulate_pde(const Json& config, const std::string& out_dir);
int run_eig(const Json& config, const std::string& out_dir);
int run_sweep(const Json& config, const std::string& out_dir);

}  // namespace syncert
