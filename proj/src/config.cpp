#include "syncert/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "syncert/errors.hpp"

namespace syncert {

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // e.byte is a 1-based offset into the text; convert to line:column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": JSON parse error: " + e.what());
  }
}

void check_keys(const Json& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InputError(ctx + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.count(it.key())) {
      throw InputError(ctx + ": unknown key \"" + it.key() + "\"");
    }
  }
}

const Json& require_key(const Json& obj, const std::string& key, const std::string& ctx) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InputError(ctx + ": missing required key \"" + key + "\"");
  }
  return obj.at(key);
}

double get_number(const Json& j, const std::string& ctx) {
  if (!j.is_number()) throw InputError(ctx + ": expected a number");
  return j.get<double>();
}

int get_int(const Json& j, const std::string& ctx) {
  if (!j.is_number_integer()) throw InputError(ctx + ": expected an integer");
  return j.get<int>();
}

bool get_bool(const Json& j, const std::string& ctx) {
  if (!j.is_boolean()) throw InputError(ctx + ": expected a boolean");
  return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& ctx) {
  if (!j.is_string()) throw InputError(ctx + ": expected a string");
  return j.get<std::string>();
}

VecX get_vector(const Json& j, const std::string& ctx) {
  if (!j.is_array()) throw InputError(ctx + ": expected an array of numbers");
  VecX v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<int>(i)] = get_number(j[i], ctx + "[" + std::to_string(i) + "]");
  }
  return v;
}

MatX get_matrix(const Json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty()) throw InputError(ctx + ": expected an array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  MatX m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const VecX row = get_vector(j[r], ctx + "[" + std::to_string(r) + "]");
    if (row.size() != static_cast<int>(cols)) {
      throw InputError(ctx + ": ragged rows");
    }
    m.row(static_cast<int>(r)) = row.transpose();
  }
  return m;
}

ComponentGraph parse_graph(const Json& j, const std::string& ctx) {
  check_keys(j, ctx, {"num_nodes", "edges", "symmetric"});
  const int n = get_int(require_key(j, "num_nodes", ctx), ctx + ".num_nodes");
  const bool symmetric = get_bool(require_key(j, "symmetric", ctx), ctx + ".symmetric");
  const Json& edges_json = require_key(j, "edges", ctx);
  if (!edges_json.is_array()) throw InputError(ctx + ".edges: expected an array");
  std::vector<Edge> edges;
  edges.reserve(edges_json.size());
  for (std::size_t e = 0; e < edges_json.size(); ++e) {
    const std::string ectx = ctx + ".edges[" + std::to_string(e) + "]";
    const Json& triple = edges_json[e];
    if (!triple.is_array() || triple.size() != 3) {
      throw InputError(ectx + ": expected [i, j, w]");
    }
    edges.push_back({get_int(triple[0], ectx + "[0]"), get_int(triple[1], ectx + "[1]"),
                     get_number(triple[2], ectx + "[2]")});
  }
  return ComponentGraph(n, std::move(edges), symmetric);
}

namespace {

ParsedModel parse_ring(const Json& j) {
  check_keys(j, "model", {"model", "n", "eta", "alpha", "beta", "d", "graphs"});
  const int n = get_int(require_key(j, "n", "model"), "model.n");
  const VecX eta = get_vector(require_key(j, "eta", "model"), "model.eta");
  const VecX alpha = get_vector(require_key(j, "alpha", "model"), "model.alpha");
  const VecX beta = get_vector(require_key(j, "beta", "model"), "model.beta");
  VecX d = VecX::Zero(n);
  if (j.contains("d")) d = get_vector(j.at("d"), "model.d");

  ParsedModel out;
  out.kind = ParsedModel::Kind::ring;
  out.n = n;
  out.ring = RingOscillatorParams::validated(n, eta, alpha, beta, d);
  if (j.contains("graphs")) {
    const Json& graphs = j.at("graphs");
    if (!graphs.is_array() || static_cast<int>(graphs.size()) != n) {
      throw InputError("model.graphs: expected one graph per component");
    }
    for (std::size_t k = 0; k < graphs.size(); ++k) {
      out.graphs.push_back(parse_graph(graphs[k], "model.graphs[" + std::to_string(k) + "]"));
    }
    out.has_graphs = true;
  }
  return out;
}

ParsedModel parse_generic(const Json& j) {
  check_keys(j, "model",
             {"model", "n", "bound", "lambda2", "coupled", "nonsymmetric", "graphs"});
  const int n = get_int(require_key(j, "n", "model"), "model.n");
  ParsedModel out;
  out.kind = ParsedModel::Kind::generic;
  out.n = n;

  const Json& bound = require_key(j, "bound", "model");
  const std::string kind = get_string(require_key(bound, "kind", "model.bound"), "model.bound.kind");
  if (kind == "hull_cone") {
    check_keys(bound, "model.bound", {"kind", "vertices", "cone"});
    HullConeBound hull;
    const Json& verts = require_key(bound, "vertices", "model.bound");
    if (!verts.is_array() || verts.empty()) {
      throw InputError("model.bound.vertices: need at least one vertex");
    }
    for (std::size_t v = 0; v < verts.size(); ++v) {
      hull.vertices.push_back(
          get_matrix(verts[v], "model.bound.vertices[" + std::to_string(v) + "]"));
    }
    if (bound.contains("cone")) {
      const Json& cone = bound.at("cone");
      if (!cone.is_array()) throw InputError("model.bound.cone: expected an array");
      for (std::size_t c = 0; c < cone.size(); ++c) {
        hull.cone_generators.push_back(
            get_matrix(cone[c], "model.bound.cone[" + std::to_string(c) + "]"));
      }
    }
    out.hull = std::move(hull);
  } else if (kind == "box") {
    check_keys(bound, "model.bound", {"kind", "A0", "B", "C"});
    BoxBound box;
    box.base = get_matrix(require_key(bound, "A0", "model.bound"), "model.bound.A0");
    const Json& bj = require_key(bound, "B", "model.bound");
    const Json& cj = require_key(bound, "C", "model.bound");
    if (!bj.is_array() || !cj.is_array() || bj.size() != cj.size()) {
      throw InputError("model.bound: B and C must be equal-length arrays of vectors");
    }
    for (std::size_t t = 0; t < bj.size(); ++t) {
      box.terms.push_back({get_vector(bj[t], "model.bound.B[" + std::to_string(t) + "]"),
                           get_vector(cj[t], "model.bound.C[" + std::to_string(t) + "]")});
    }
    out.box = std::move(box);
  } else {
    throw InputError("model.bound.kind: expected \"hull_cone\" or \"box\"");
  }

  if (j.contains("graphs")) {
    const Json& graphs = j.at("graphs");
    if (!graphs.is_array() || static_cast<int>(graphs.size()) != n) {
      throw InputError("model.graphs: expected one graph per component");
    }
    for (std::size_t k = 0; k < graphs.size(); ++k) {
      out.graphs.push_back(parse_graph(graphs[k], "model.graphs[" + std::to_string(k) + "]"));
    }
    out.has_graphs = true;
  } else {
    VecX l2 = VecX::Zero(n);
    if (j.contains("lambda2")) {
      l2 = get_vector(j.at("lambda2"), "model.lambda2");
      if (l2.size() != n) throw InputError("model.lambda2: expected n entries");
      out.has_lambda2 = true;
    }
    out.lambda2s = l2;
    out.coupling = CouplingSpec::none(n);
    if (j.contains("coupled")) {
      const Json& c = j.at("coupled");
      if (!c.is_array()) throw InputError("model.coupled: expected an array of component indices");
      for (const Json& idx : c) {
        const int k = get_int(idx, "model.coupled[]");
        if (k < 1 || k > n) throw InputError("model.coupled: index out of range");
        out.coupling.coupled[k - 1] = true;
      }
    }
    if (j.contains("nonsymmetric")) {
      const Json& c = j.at("nonsymmetric");
      if (!c.is_array()) throw InputError("model.nonsymmetric: expected an array");
      for (const Json& idx : c) {
        const int k = get_int(idx, "model.nonsymmetric[]");
        if (k < 1 || k > n) throw InputError("model.nonsymmetric: index out of range");
        out.coupling.nonsymmetric[k - 1] = true;
      }
    }
  }
  return out;
}

}  // namespace

ParsedModel parse_model(const Json& j) {
  const std::string kind = get_string(require_key(j, "model", "model"), "model.model");
  if (kind == "ring_oscillator") return parse_ring(j);
  if (kind == "generic") return parse_generic(j);
  if (kind == "zero") {
    check_keys(j, "model", {"model", "n"});
    ParsedModel out;
    out.kind = ParsedModel::Kind::zero;
    out.n = get_int(require_key(j, "n", "model"), "model.n");
    if (out.n < 1) throw InputError("model.n: must be positive");
    return out;
  }
  throw InputError("model.model: expected \"ring_oscillator\", \"generic\" or \"zero\"");
}

GridProfile parse_grid_profile(const Json& j) {
  check_keys(j, "grid", {"length", "cells", "a", "alpha"});
  const double length = get_number(require_key(j, "length", "grid"), "grid.length");
  const int cells = get_int(require_key(j, "cells", "grid"), "grid.cells");
  PdeGrid grid(length, cells);

  const Json& a = require_key(j, "a", "grid");
  if (!a.is_array() || a.empty()) {
    throw InputError("grid.a: expected one entry per component");
  }
  std::vector<VecX> coeffs;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const std::string ctx = "grid.a[" + std::to_string(k) + "]";
    if (a[k].is_number()) {
      coeffs.push_back(VecX::Constant(cells + 1, get_number(a[k], ctx)));
    } else {
      VecX faces = get_vector(a[k], ctx);
      if (faces.size() != cells + 1) {
        throw InputError(ctx + ": expected cells+1 face samples (or a constant)");
      }
      coeffs.push_back(std::move(faces));
    }
  }

  double alpha;
  if (j.contains("alpha")) {
    alpha = get_number(j.at("alpha"), "grid.alpha");
  } else {
    alpha = std::numeric_limits<double>::infinity();
    for (const VecX& c : coeffs) {
      for (int f = 1; f < cells; ++f) alpha = std::min(alpha, c[f]);
    }
  }
  return {grid, DiffusionProfile(std::move(coeffs), alpha, cells)};
}

NumericsConfig parse_numerics(const Json& j) {
  check_keys(j, "numerics", {"dt", "t_end", "seed"});
  NumericsConfig out;
  if (j.contains("dt")) {
    out.dt = get_number(j.at("dt"), "numerics.dt");
    if (!(*out.dt > 0.0)) throw InputError("numerics.dt: must be positive");
  }
  if (j.contains("t_end")) {
    out.t_end = get_number(j.at("t_end"), "numerics.t_end");
    if (!(*out.t_end > 0.0)) throw InputError("numerics.t_end: must be positive");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
      throw InputError("numerics.seed: expected a nonnegative integer");
    }
    out.seed = j.at("seed").get<std::uint64_t>();
  }
  return out;
}

X0Config parse_x0(const Json& j) {
  check_keys(j, "x0", {"mode", "range", "values"});
  X0Config out;
  const std::string mode = get_string(require_key(j, "mode", "x0"), "x0.mode");
  if (mode == "random") {
    out.mode = X0Config::Mode::random;
  } else if (mode == "identical_random") {
    out.mode = X0Config::Mode::identical_random;
  } else if (mode == "explicit") {
    out.mode = X0Config::Mode::explicit_values;
    out.values = get_vector(require_key(j, "values", "x0"), "x0.values");
  } else if (mode == "constant") {
    out.mode = X0Config::Mode::constant;
    out.values = get_vector(require_key(j, "values", "x0"), "x0.values");
  } else {
    throw InputError("x0.mode: expected random, identical_random, explicit or constant");
  }
  if (j.contains("range")) {
    const VecX r = get_vector(j.at("range"), "x0.range");
    if (r.size() != 2 || !(r[0] < r[1])) throw InputError("x0.range: expected [lo, hi]");
    out.lo = r[0];
    out.hi = r[1];
  }
  return out;
}

std::optional<std::uint64_t> env_seed_override() {
  const char* v = std::getenv("SYNCERT_SEED");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(v, &end, 10);
  if (end == v || *end != '\0') {
    throw InputError("SYNCERT_SEED: expected a nonnegative integer");
  }
  return static_cast<std::uint64_t>(parsed);
}

}  // namespace syncert
