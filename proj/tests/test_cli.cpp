#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "syncert/config.hpp"
#include "syncert/ode_sim.hpp"
#include "syncert/ring_oscillator.hpp"

using namespace syncert;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "syncert_cli_test";

struct CliRun {
  int exit_code;
  std::string stdout_text;
  std::string stderr_text;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun run_cli(const std::string& args, const std::string& env = "") {
  const fs::path out = kWork / "stdout.txt";
  const fs::path err = kWork / "stderr.txt";
  std::string cmd = env;
  if (!env.empty()) cmd += " ";
  cmd += std::string(SYNCERT_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
         err.string();
  const int rc = std::system(cmd.c_str());
  return {WEXITSTATUS(rc), slurp(out), slurp(err)};
}

fs::path write_config(const std::string& name, const Json& j) {
  const fs::path p = kWork / name;
  std::ofstream f(p);
  f << j.dump(2);
  return p;
}

Json fig1_model(double ab, double d1, double d2) {
  const Json triangle = {{"num_nodes", 3},
                         {"edges", {{1, 2, 1.0}, {2, 3, 1.0}, {1, 3, 1.0}}},
                         {"symmetric", true}};
  const Json path = {{"num_nodes", 3}, {"edges", {{1, 2, 1.0}, {2, 3, 1.0}}}, {"symmetric", true}};
  const Json none = {{"num_nodes", 3}, {"edges", Json::array()}, {"symmetric", true}};
  return {{"model", "ring_oscillator"},
          {"n", 3},
          {"eta", {1.0, 1.0, 1.0}},
          {"alpha", {ab, ab, ab}},
          {"beta", {1.0, 1.0, 1.0}},
          {"d", {d1, d2, 0.0}},
          {"graphs", {triangle, path, none}}};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

struct Setup {
  Setup() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};
const Setup setup_once;

}  // namespace

TEST_CASE("certify: certifiable figure-one topology exits 0 with a full report") {
  const Json config = {{"model", fig1_model(std::cbrt(1.6), 0.5, 0.4)},
                       {"numerics", {{"seed", 11}}}};
  const fs::path cfg = write_config("certify_ok.json", config);
  const CliRun r = run_cli("certify --config " + cfg.string() + " --out " + kWork.string());
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("FEASIBLE") != std::string::npos);
  CHECK(r.stdout_text.find("secant ratio") != std::string::npos);
  CHECK(r.stdout_text.find("predicted sync rate") != std::string::npos);
  CHECK(slurp(kWork / "report.txt") == r.stdout_text);
}

TEST_CASE("certify: inflated gains exit 2") {
  const Json config = {{"model", fig1_model(std::cbrt(9.5), 0.1, 0.1)}};
  const fs::path cfg = write_config("certify_bad.json", config);
  const CliRun r = run_cli("certify --config " + cfg.string() + " --out " + kWork.string());
  CHECK(r.exit_code == 2);
  CHECK(r.stdout_text.find("INFEASIBLE") != std::string::npos);
}

TEST_CASE("certify: missing graphs key exits 1") {
  Json model = fig1_model(1.0, 0.5, 0.5);
  model.erase("graphs");
  const Json config = {{"model", model}};
  const fs::path cfg = write_config("certify_nographs.json", config);
  const CliRun r = run_cli("certify --config " + cfg.string() + " --out " + kWork.string());
  CHECK(r.exit_code == 1);
  CHECK(r.stderr_text.find("graphs") != std::string::npos);
}

TEST_CASE("malformed JSON exits 1 with a line-anchored message") {
  const fs::path cfg = kWork / "broken.json";
  std::ofstream(cfg) << "{\n  \"model\": [,]\n}\n";
  const CliRun r = run_cli("certify --config " + cfg.string());
  CHECK(r.exit_code == 1);
  CHECK(r.stderr_text.find(":2:") != std::string::npos);
}

TEST_CASE("unknown keys are rejected") {
  Json config = {{"model", fig1_model(1.0, 0.5, 0.5)}, {"typo_key", 1}};
  const fs::path cfg = write_config("certify_unknown.json", config);
  const CliRun r = run_cli("certify --config " + cfg.string());
  CHECK(r.exit_code == 1);
  CHECK(r.stderr_text.find("typo_key") != std::string::npos);
}

TEST_CASE("simulate-ode: identical initial conditions keep the error at zero") {
  const Json config = {{"model", fig1_model(1.2, 0.5, 0.4)},
                       {"numerics", {{"dt", 0.01}, {"t_end", 5.0}, {"seed", 3}}},
                       {"x0", {{"mode", "identical_random"}}}};
  const fs::path cfg = write_config("sim_identical.json", config);
  const fs::path out = kWork / "sim_identical";
  const CliRun r = run_cli("simulate-ode --config " + cfg.string() + " --out " + out.string());
  REQUIRE(r.exit_code == 0);
  const auto rows = read_csv(out / "metrics.csv");
  REQUIRE(rows.size() > 2);
  CHECK(rows[0][1] == "sync_error");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][1]) <= 1e-10);
  }
}

TEST_CASE("simulate-ode trajectory matches an in-process run") {
  const Json config = {{"model", fig1_model(1.2, 0.5, 0.4)},
                       {"numerics", {{"dt", 0.02}, {"t_end", 1.0}, {"seed", 42}}},
                       {"x0", {{"mode", "explicit"},
                               {"values", {0.4, -0.2, 0.1, 0.0, 0.3, -0.5, 0.2, 0.2, -0.1}}}}};
  const fs::path cfg = write_config("sim_match.json", config);
  const fs::path out = kWork / "sim_match";
  const CliRun r = run_cli("simulate-ode --config " + cfg.string() + " --out " + out.string());
  REQUIRE(r.exit_code == 0);

  const RingOscillatorParams params = RingOscillatorParams::validated(
      3, VecX::Ones(3), VecX::Constant(3, 1.2), VecX::Ones(3),
      (VecX(3) << 0.5, 0.4, 0.0).finished());
  const ComponentGraph triangle(3, {{1, 2, 1.0}, {2, 3, 1.0}, {1, 3, 1.0}}, true);
  const ComponentGraph path(3, {{1, 2, 1.0}, {2, 3, 1.0}}, true);
  const ComponentGraph none(3, {}, true);
  const NetworkModel net = build_network(params, {triangle, path, none});
  VecX x0(9);
  x0 << 0.4, -0.2, 0.1, 0.0, 0.3, -0.5, 0.2, 0.2, -0.1;
  const Trajectory traj = simulate(net, x0, 1.0, 0.02);

  const auto rows = read_csv(out / "trajectory.csv");
  REQUIRE(rows.size() == traj.states.size() + 1);
  REQUIRE(rows[0].size() == 10);
  for (std::size_t s = 1; s < rows.size(); ++s) {
    for (int c = 0; c < 9; ++c) {
      CHECK(std::stod(rows[s][c + 1]) ==
            doctest::Approx(traj.states[s - 1][c]).epsilon(1e-15));
    }
  }
}

TEST_CASE("sweep: deterministic bytes, seed override, empty range") {
  const Json config = {{"sweep",
                        {{"draws", 6},
                         {"n", 3},
                         {"eta_range", {0.5, 2.0}},
                         {"alphabeta_range", {0.5, 4.0}},
                         {"lambda2_range", {0.0, 2.0}},
                         {"exclude_band", 0.4},
                         {"seed", 2024}}}};
  const fs::path cfg = write_config("sweep.json", config);
  const fs::path out1 = kWork / "sweep1";
  const fs::path out2 = kWork / "sweep2";
  const fs::path out3 = kWork / "sweep3";
  REQUIRE(run_cli("sweep --config " + cfg.string() + " --out " + out1.string()).exit_code == 0);
  REQUIRE(run_cli("sweep --config " + cfg.string() + " --out " + out2.string()).exit_code == 0);
  CHECK(slurp(out1 / "sweep.csv") == slurp(out2 / "sweep.csv"));
  REQUIRE(run_cli("sweep --config " + cfg.string() + " --out " + out3.string(),
                  "SYNCERT_SEED=777").exit_code == 0);
  CHECK(slurp(out1 / "sweep.csv") != slurp(out3 / "sweep.csv"));

  const auto rows = read_csv(out1 / "sweep.csv");
  REQUIRE(rows.size() == 7);
  CHECK(rows[0].back() == "agree");
  // the exclusion band really is excluded
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double ratio = std::stod(rows[i][10]);
    CHECK(std::abs(ratio - 8.0) > 0.4);
  }

  Json empty = config;
  empty["sweep"]["draws"] = 0;
  const fs::path cfg0 = write_config("sweep0.json", empty);
  const fs::path out0 = kWork / "sweep0";
  REQUIRE(run_cli("sweep --config " + cfg0.string() + " --out " + out0.string()).exit_code == 0);
  const auto rows0 = read_csv(out0 / "sweep.csv");
  CHECK(rows0.size() == 1);  // header only
}

TEST_CASE("simulate-pde: constant field stays uniform; CFL violation exits 1") {
  const Json grid = {{"length", 3.141592653589793}, {"cells", 40}, {"a", {1.0, 1.0, 1.0}}};
  const Json config = {{"model", {{"model", "zero"}, {"n", 3}}},
                       {"grid", grid},
                       {"numerics", {{"t_end", 0.5}, {"seed", 1}}},
                       {"x0", {{"mode", "constant"}, {"values", {0.3, -0.1, 2.0}}}}};
  const fs::path cfg = write_config("pde_const.json", config);
  const fs::path out = kWork / "pde_const";
  const CliRun r = run_cli("simulate-pde --config " + cfg.string() + " --out " + out.string());
  REQUIRE(r.exit_code == 0);
  const auto rows = read_csv(out / "pi_norm.csv");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) <= 1e-12);
  CHECK(r.stdout_text.find("mean drift") != std::string::npos);

  Json bad = config;
  bad["numerics"]["dt"] = 1.0;  // far above the parabolic bound
  const fs::path cfgbad = write_config("pde_cfl.json", bad);
  const CliRun rb = run_cli("simulate-pde --config " + cfgbad.string() + " --out " + out.string());
  CHECK(rb.exit_code == 1);
  CHECK(rb.stderr_text.find("max admissible dt") != std::string::npos);
}

TEST_CASE("eig: graphs, scaled model, and elliptic sources") {
  const Json k3 = {{"num_nodes", 3},
                   {"edges", {{1, 2, 1.0}, {2, 3, 1.0}, {1, 3, 1.0}}},
                   {"symmetric", true}};
  const Json config = {{"graphs", {k3}},
                       {"model", fig1_model(1.0, 0.5, 0.25)},
                       {"grid", {{"length", 3.141592653589793}, {"cells", 200}, {"a", {1.0}}}}};
  const fs::path cfg = write_config("eig.json", config);
  const fs::path out = kWork / "eig";
  const CliRun r = run_cli("eig --config " + cfg.string() + " --out " + out.string());
  REQUIRE(r.exit_code == 0);
  const auto rows = read_csv(out / "lambda2.csv");
  REQUIRE(rows.size() == 6);  // header + 3 model rows + 1 graph row + 1 grid row
  // model rows first: 3*d1, d2, 0
  CHECK(std::stod(rows[1][1]) == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(std::stod(rows[2][1]) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(std::stod(rows[3][1]) == doctest::Approx(0.0));
  // raw K3 graph
  CHECK(std::stod(rows[4][1]) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(rows[4][2] == "graph");
  // unit-coefficient elliptic operator on [0, pi]
  CHECK(std::stod(rows[5][1]) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(rows[5][2] == "elliptic");
}

TEST_CASE("certify: generic hull model and a negative-lambda2 refusal") {
  const Json generic = {{"model",
                         {{"model", "generic"},
                          {"n", 2},
                          {"bound",
                           {{"kind", "hull_cone"},
                            {"vertices", {{{-1.0, 0.5}, {0.5, -2.0}}}},
                            {"cone", Json::array()}}},
                          {"lambda2", {0.8, 0.0}},
                          {"coupled", {1}}}},
                        {"method", "hull_cone"}};
  const fs::path cfg = write_config("certify_generic.json", generic);
  const CliRun r = run_cli("certify --config " + cfg.string() + " --out " +
                           (kWork / "generic").string());
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("hull_cone") != std::string::npos);

  // a negative edge weight makes the restricted lambda2 negative: refusal
  Json refused = {{"model", fig1_model(1.0, 0.5, 0.4)}};
  refused["model"]["graphs"][0]["edges"] = {{1, 2, -1.0}};
  const fs::path cfg2 = write_config("certify_refused.json", refused);
  const CliRun r2 = run_cli("certify --config " + cfg2.string() + " --out " +
                            (kWork / "refused").string());
  CHECK(r2.exit_code == 1);
  CHECK(r2.stderr_text.find("no positive lambda2") != std::string::npos);
}

TEST_CASE("divergent integration exits 3") {
  const Json config = {{"model", fig1_model(1.0, 0.2, 0.2)},
                       {"numerics", {{"dt", 5.0}, {"t_end", 2000.0}, {"seed", 5}}},
                       {"x0", {{"mode", "random"}}}};
  const fs::path cfg = write_config("diverge.json", config);
  const CliRun r = run_cli("simulate-ode --config " + cfg.string() + " --out " +
                           (kWork / "diverge").string());
  CHECK(r.exit_code == 3);
  CHECK(r.stderr_text.find("non-finite") != std::string::npos);
}
