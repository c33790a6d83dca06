#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "syncert/commands.hpp"
#include "syncert/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"syncert — synchronization certificates and simulations for diffusively "
               "coupled networks and 1D reaction-diffusion systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration")->required();
    cmd->add_option("--out", out_dir, "output directory (default: current)");
  };

  CLI::App* certify = app.add_subcommand("certify", "decide the synchronization LMIs");
  CLI::App* sim_ode = app.add_subcommand("simulate-ode", "integrate the coupled network");
  CLI::App* sim_pde = app.add_subcommand("simulate-pde", "integrate the reaction-diffusion system");
  CLI::App* eig = app.add_subcommand("eig", "report per-component lambda2 values");
  CLI::App* sweep = app.add_subcommand("sweep", "random parameter sweep: secant vs LMI");
  for (CLI::App* cmd : {certify, sim_ode, sim_pde, eig, sweep}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const syncert::Json config = syncert::load_json_file(config_path);
    if (certify->parsed()) return syncert::run_certify(config, out_dir);
    if (sim_ode->parsed()) return syncert::run_simulate_ode(config, out_dir);
    if (sim_pde->parsed()) return syncert::run_simulate_pde(config, out_dir);
    if (eig->parsed()) return syncert::run_eig(config, out_dir);
    if (sweep->parsed()) return syncert::run_sweep(config, out_dir);
  } catch (const syncert::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
