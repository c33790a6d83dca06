#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "syncert/cert.hpp"
#include "syncert/graph.hpp"
#include "syncert/pde_sim.hpp"
#include "syncert/ring_oscillator.hpp"

namespace syncert {

using Json = nlohmann::json;

/// Parses a JSON file; parse errors are reported with line:column anchors.
Json load_json_file(const std::string& path);

/// Rejects keys outside the allowed set (strict schemas).
void check_keys(const Json& obj, const std::string& ctx, std::initializer_list<const char*> allowed);

const Json& require_key(const Json& obj, const std::string& key, const std::string& ctx);
double get_number(const Json& j, const std::string& ctx);
int get_int(const Json& j, const std::string& ctx);
bool get_bool(const Json& j, const std::string& ctx);
std::string get_string(const Json& j, const std::string& ctx);
VecX get_vector(const Json& j, const std::string& ctx);
MatX get_matrix(const Json& j, const std::string& ctx);

ComponentGraph parse_graph(const Json& j, const std::string& ctx);

struct ParsedModel {
  enum class Kind { ring, generic, zero };
  Kind kind = Kind::ring;
  int n = 0;

  std::optional<RingOscillatorParams> ring;
  std::vector<ComponentGraph> graphs;
  bool has_graphs = false;

  std::optional<HullConeBound> hull;
  std::optional<BoxBound> box;
  VecX lambda2s;
  CouplingSpec coupling = CouplingSpec::none(0);
  bool has_lambda2 = false;
};

ParsedModel parse_model(const Json& j);

struct GridProfile {
  PdeGrid grid;
  DiffusionProfile profile;
};

GridProfile parse_grid_profile(const Json& j);

struct NumericsConfig {
  std::optional<double> dt;
  std::optional<double> t_end;
  std::uint64_t seed = 0;
};

NumericsConfig parse_numerics(const Json& j);

struct X0Config {
  enum class Mode { random, identical_random, explicit_values, constant };
  Mode mode = Mode::random;
  double lo = -1.0;
  double hi = 1.0;
  VecX values;
};

X0Config parse_x0(const Json& j);

/// SYNCERT_SEED, when set, overrides every configured seed.
std::optional<std::uint64_t> env_seed_override();

}  // namespace syncert
