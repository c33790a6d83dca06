#include "syncert/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "syncert/csv.hpp"
#include "syncert/errors.hpp"
#include "syncert/ode_sim.hpp"
#include "syncert/rng.hpp"

namespace syncert {

namespace {

std::string out_path(const std::string& out_dir, const std::string& name) {
  std::filesystem::create_directories(out_dir);
  return (std::filesystem::path(out_dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot open output file: " + path);
  return f;
}

std::string output_name(const Json& config, const char* key, const char* fallback) {
  if (config.contains("output")) {
    const Json& o = config.at("output");
    if (o.contains(key)) return get_string(o.at(key), std::string("output.") + key);
  }
  return fallback;
}

int output_int(const Json& config, const char* key, int fallback) {
  if (config.contains("output")) {
    const Json& o = config.at("output");
    if (o.contains(key)) return get_int(o.at(key), std::string("output.") + key);
  }
  return fallback;
}

std::string method_name(CertMethod m) {
  switch (m) {
    case CertMethod::hull_cone:       return "hull_cone";
    case CertMethod::box:             return "box";
    case CertMethod::secant_diagonal: return "secant_diagonal";
  }
  return "?";
}

/// Everything a certification run needs, assembled from a parsed model.
struct CertInput {
  int n = 0;
  std::optional<BoxBound> box;
  std::optional<HullConeBound> hull;
  VecX lambda2s;
  CouplingSpec coupling = CouplingSpec::none(0);
  std::optional<SecantResult> secant;  // ring models
  std::vector<std::string> lambda2_sources;
};

CertInput cert_input_from_ring(const RingOscillatorParams& params,
                               const std::vector<ComponentGraph>& graphs) {
  CertInput in;
  in.n = params.n;
  in.box = box_bound(params);
  in.lambda2s = VecX::Zero(params.n);
  in.coupling = CouplingSpec::none(params.n);
  for (int k = 0; k < params.n; ++k) {
    LaplacianMatrix l = params.coupling_d[k] == 0.0
                            ? zero_laplacian(graphs[k].num_nodes())
                            : scale_laplacian(build_laplacian(graphs[k]), params.coupling_d[k]);
    const bool coupled = !l.matrix.isZero(0.0);
    in.coupling.coupled[k] = coupled;
    in.coupling.nonsymmetric[k] = coupled && !graphs[k].symmetric();
    in.lambda2s[k] = l.lambda2;
    in.lambda2_sources.push_back(coupled ? "graph*d" : "uncoupled");
    if (coupled && l.lambda2 < 0.0) {
      throw InputError("component " + std::to_string(k + 1) +
                       ": no positive lambda2 (restriction to the ones-complement is "
                       "indefinite); certification refused");
    }
  }
  VecX ab(params.n);
  for (int k = 0; k < params.n; ++k) ab[k] = params.alpha[k] * params.beta[k];
  in.secant = secant_criterion(params.eta, ab, in.lambda2s);
  return in;
}

CertInput cert_input_from_model(const ParsedModel& model) {
  if (model.kind == ParsedModel::Kind::ring) {
    if (!model.has_graphs) {
      throw InputError("certify: ring_oscillator model needs \"graphs\"");
    }
    return cert_input_from_ring(*model.ring, model.graphs);
  }
  if (model.kind == ParsedModel::Kind::zero) {
    throw InputError("certify: the zero model has nothing to certify");
  }

  CertInput in;
  in.n = model.n;
  in.box = model.box;
  in.hull = model.hull;
  if (model.has_graphs) {
    in.lambda2s = VecX::Zero(model.n);
    in.coupling = CouplingSpec::none(model.n);
    for (int k = 0; k < model.n; ++k) {
      const LaplacianMatrix l = build_laplacian(model.graphs[k]);
      const bool coupled = !l.matrix.isZero(0.0);
      in.coupling.coupled[k] = coupled;
      in.coupling.nonsymmetric[k] = coupled && !model.graphs[k].symmetric();
      in.lambda2s[k] = l.lambda2;
      in.lambda2_sources.push_back(coupled ? "graph" : "uncoupled");
      if (coupled && l.lambda2 < 0.0) {
        throw InputError("component " + std::to_string(k + 1) +
                         ": no positive lambda2; certification refused");
      }
    }
  } else {
    in.lambda2s = model.lambda2s;
    in.coupling = model.coupling;
    for (int k = 0; k < model.n; ++k) {
      in.lambda2_sources.push_back(model.has_lambda2 ? "config" : "zero");
    }
  }
  return in;
}

struct MethodAttempt {
  std::string method;
  CertifyResult result;
};

/// Runs the requested method, or for "auto" tries secant_diagonal, box, hull
/// in that order and keeps the first feasible outcome.
std::vector<MethodAttempt> run_methods(const CertInput& in, const std::string& method,
                                       const LmiOptions& opts) {
  std::vector<MethodAttempt> attempts;
  auto hull_bound = [&]() -> HullConeBound {
    if (in.hull) return *in.hull;
    return hull_from_box(*in.box);
  };

  if (method == "secant_diagonal") {
    if (!in.box) throw InputError("certify: secant_diagonal needs a box bound");
    attempts.push_back({"secant_diagonal", certify_secant_diagonal(*in.box, in.lambda2s, in.coupling, opts)});
  } else if (method == "box") {
    if (!in.box) throw InputError("certify: box method needs a box bound");
    attempts.push_back({"box", certify_box(*in.box, in.lambda2s, in.coupling, opts)});
  } else if (method == "hull_cone") {
    attempts.push_back({"hull_cone", certify_hull_cone(hull_bound(), in.lambda2s, in.coupling, opts)});
  } else if (method == "auto") {
    if (in.box) {
      attempts.push_back(
          {"secant_diagonal", certify_secant_diagonal(*in.box, in.lambda2s, in.coupling, opts)});
      if (attempts.back().result.feasible()) return attempts;
      attempts.push_back({"box", certify_box(*in.box, in.lambda2s, in.coupling, opts)});
      if (attempts.back().result.feasible()) return attempts;
      if (static_cast<int>(in.box->terms.size()) <= 12) {
        attempts.push_back(
            {"hull_cone", certify_hull_cone(hull_bound(), in.lambda2s, in.coupling, opts)});
      }
    } else {
      attempts.push_back(
          {"hull_cone", certify_hull_cone(*in.hull, in.lambda2s, in.coupling, opts)});
    }
  } else {
    throw InputError("certify: unknown method \"" + method + "\"");
  }
  return attempts;
}

void write_report(std::ostream& os, const CertInput& in, const std::vector<MethodAttempt>& attempts,
                  const Certificate* cert) {
  os << "syncert certification report\n";
  os << "components: " << in.n << "\n";
  os << "lambda2:";
  for (int k = 0; k < in.n; ++k) {
    os << " " << format_g17(in.lambda2s[k]);
    if (!in.lambda2_sources.empty()) os << " (" << in.lambda2_sources[k] << ")";
  }
  os << "\n";
  os << "coupled components:";
  bool any = false;
  for (int k = 0; k < in.n; ++k) {
    if (in.coupling.coupled[k]) {
      os << " " << (k + 1);
      any = true;
    }
  }
  if (!any) os << " none";
  os << "\n";
  if (in.secant) {
    os << "secant ratio = " << format_g17(in.secant->ratio)
       << ", threshold = " << format_g17(in.secant->threshold) << " ("
       << (in.secant->pass ? "pass" : "fail") << ")\n";
  }
  for (const MethodAttempt& a : attempts) {
    os << "method " << a.method << ": "
       << (a.result.feasible() ? "feasible" : "infeasible — " + a.result.failure_reason)
       << " [restarts " << a.result.solver.restarts_used << ", iterations "
       << a.result.solver.iterations << ", seed " << a.result.solver.seed << "]\n";
  }
  if (cert) {
    os << "result: FEASIBLE (method " << method_name(cert->method) << ")\n";
    os << "epsilon = " << format_g17(cert->epsilon) << "\n";
    const EigenDecomposition pe = sym_eigs(cert->P);
    os << "lambda_min(P) = " << format_g17(pe.eigenvalues[0])
       << ", lambda_max(P) = " << format_g17(pe.eigenvalues[cert->P.dim() - 1]) << "\n";
    os << "predicted sync rate = " << format_g17(predicted_rate(*cert)) << "\n";
    os << "P =\n";
    for (int i = 0; i < cert->P.dim(); ++i) {
      os << " ";
      for (int j = 0; j < cert->P.dim(); ++j) os << " " << format_g17(cert->P(i, j));
      os << "\n";
    }
    os << "strict residuals:";
    for (double r : cert->residuals) os << " " << format_g17(r);
    os << "\n";
    if (!cert->commutation_residuals.empty()) {
      os << "commutation min-eigs:";
      for (double r : cert->commutation_residuals) os << " " << format_g17(r);
      os << "\n";
    }
  } else {
    os << "result: INFEASIBLE\n";
  }
}

VecX build_ode_x0(const X0Config& x0, int N, int n, std::uint64_t seed) {
  switch (x0.mode) {
    case X0Config::Mode::explicit_values: {
      if (x0.values.size() != N * n) {
        throw InputError("x0.values: expected N*n entries");
      }
      return x0.values;
    }
    case X0Config::Mode::constant: {
      if (x0.values.size() != n) throw InputError("x0.values: expected n entries");
      VecX out(N * n);
      for (int i = 0; i < N; ++i) out.segment(i * n, n) = x0.values;
      return out;
    }
    case X0Config::Mode::identical_random: {
      SplitMix64 rng(mix_seed(seed, 0x1C0ull));
      VecX one(n);
      for (int k = 0; k < n; ++k) one[k] = rng.uniform(x0.lo, x0.hi);
      VecX out(N * n);
      for (int i = 0; i < N; ++i) out.segment(i * n, n) = one;
      return out;
    }
    case X0Config::Mode::random:
    default: {
      SplitMix64 rng(mix_seed(seed, 0x1C0ull));
      VecX out(N * n);
      for (int c = 0; c < N * n; ++c) out[c] = rng.uniform(x0.lo, x0.hi);
      return out;
    }
  }
}

MatX build_pde_x0(const X0Config& x0, int n, int cells, std::uint64_t seed) {
  switch (x0.mode) {
    case X0Config::Mode::constant: {
      if (x0.values.size() != n) throw InputError("x0.values: expected n entries");
      MatX out(n, cells);
      for (int k = 0; k < n; ++k) out.row(k).setConstant(x0.values[k]);
      return out;
    }
    case X0Config::Mode::explicit_values: {
      if (x0.values.size() != n * cells) {
        throw InputError("x0.values: expected n*cells entries (row-major by component)");
      }
      MatX out(n, cells);
      for (int k = 0; k < n; ++k) {
        out.row(k) = x0.values.segment(k * cells, cells).transpose();
      }
      return out;
    }
    case X0Config::Mode::identical_random:
      throw InputError("x0.mode identical_random is not meaningful for a PDE field");
    case X0Config::Mode::random:
    default: {
      SplitMix64 rng(mix_seed(seed, 0x1C0ull));
      MatX out(n, cells);
      for (int k = 0; k < n; ++k) {
        for (int m = 0; m < cells; ++m) out(k, m) = rng.uniform(x0.lo, x0.hi);
      }
      return out;
    }
  }
}

}  // namespace

int run_certify(const Json& config, const std::string& out_dir) {
  check_keys(config, "config", {"model", "method", "numerics", "output"});
  const ParsedModel model = parse_model(require_key(config, "model", "config"));
  std::string method = "auto";
  if (config.contains("method")) method = get_string(config.at("method"), "method");
  NumericsConfig numerics;
  if (config.contains("numerics")) numerics = parse_numerics(config.at("numerics"));
  if (const auto env = env_seed_override()) numerics.seed = *env;
  if (config.contains("output")) {
    check_keys(config.at("output"), "output", {"report"});
  }

  const CertInput in = cert_input_from_model(model);
  LmiOptions opts;
  opts.seed = numerics.seed;
  const std::vector<MethodAttempt> attempts = run_methods(in, method, opts);

  const Certificate* cert = nullptr;
  for (const MethodAttempt& a : attempts) {
    if (a.result.feasible()) {
      cert = &*a.result.certificate;
      break;
    }
  }

  std::ostringstream report;
  write_report(report, in, attempts, cert);
  std::cout << report.str();
  auto f = open_out(out_path(out_dir, output_name(config, "report", "report.txt")));
  f << report.str();

  return cert ? 0 : 2;
}

int run_simulate_ode(const Json& config, const std::string& out_dir) {
  check_keys(config, "config", {"model", "numerics", "x0", "state_box", "output"});
  const ParsedModel model = parse_model(require_key(config, "model", "config"));
  if (model.kind != ParsedModel::Kind::ring || !model.has_graphs) {
    throw InputError("simulate-ode: needs a ring_oscillator model with graphs");
  }
  NumericsConfig numerics = parse_numerics(require_key(config, "numerics", "config"));
  if (const auto env = env_seed_override()) numerics.seed = *env;
  if (!numerics.t_end) throw InputError("numerics.t_end: required for simulate-ode");
  X0Config x0cfg;
  if (config.contains("x0")) x0cfg = parse_x0(config.at("x0"));
  if (config.contains("output")) {
    check_keys(config.at("output"), "output",
               {"trajectory", "metrics", "summary", "stride"});
  }

  const NetworkModel net = build_network(*model.ring, model.graphs);
  const int N = net.num_compartments;
  const int n = net.state_dim;

  OdeSimOptions sim_opts;
  if (config.contains("state_box")) {
    const Json& b = config.at("state_box");
    check_keys(b, "state_box", {"lo", "hi"});
    StateBox box{get_vector(require_key(b, "lo", "state_box"), "state_box.lo"),
                 get_vector(require_key(b, "hi", "state_box"), "state_box.hi")};
    sim_opts.state_box = std::move(box);
  }

  double dt;
  if (numerics.dt) {
    dt = *numerics.dt;
  } else {
    const double denom = std::max(model.ring->eta.maxCoeff(), net.lambda2s().maxCoeff());
    dt = 0.01 / std::max(denom, 1e-6);
  }

  const VecX x0 = build_ode_x0(x0cfg, N, n, numerics.seed);
  const Trajectory traj = simulate(net, x0, *numerics.t_end, dt, sim_opts);
  SyncMetrics metrics = sync_error(traj, N, n);
  fit_decay_rate(metrics);

  // predicted rate from a certification attempt on the same model
  std::string predicted = "n/a";
  try {
    const CertInput in = cert_input_from_ring(*model.ring, model.graphs);
    LmiOptions opts;
    opts.seed = numerics.seed;
    const auto attempts = run_methods(in, "auto", opts);
    for (const MethodAttempt& a : attempts) {
      if (a.result.feasible()) {
        metrics.predicted_rate = predicted_rate(*a.result.certificate);
        predicted = format_g17(metrics.predicted_rate);
        break;
      }
    }
  } catch (const InputError&) {
    // certification refusal leaves the simulation result intact
  }

  const int stride = std::max(1, output_int(config, "stride", 1));
  {
    auto f = open_out(out_path(out_dir, output_name(config, "trajectory", "trajectory.csv")));
    write_trajectory_csv(f, traj, N, n, stride);
  }
  {
    auto f = open_out(out_path(out_dir, output_name(config, "metrics", "metrics.csv")));
    write_metrics_csv(f, metrics);
  }

  std::ostringstream summary;
  summary << "samples = " << traj.states.size() << ", dt = " << format_g17(dt) << "\n";
  summary << "fitted sync rate = "
          << (metrics.fit_valid ? format_g17(metrics.fitted_rate) : "n/a")
          << (metrics.floored ? " (error floored)" : "") << "\n";
  summary << "predicted sync rate = " << predicted << "\n";
  summary << "final sync error = " << format_g17(metrics.error_norm[metrics.error_norm.size() - 1])
          << "\n";
  if (sim_opts.state_box) {
    if (traj.box_exit_time) {
      summary << "state box: exited at t = " << format_g17(*traj.box_exit_time) << "\n";
    } else {
      summary << "state box: never exited\n";
    }
  }
  std::cout << summary.str();
  auto f = open_out(out_path(out_dir, output_name(config, "summary", "summary.txt")));
  f << summary.str();
  return 0;
}

int run_simulate_pde(const Json& config, const std::string& out_dir) {
  check_keys(config, "config", {"model", "grid", "numerics", "x0", "output"});
  const ParsedModel model = parse_model(require_key(config, "model", "config"));
  GridProfile gp = parse_grid_profile(require_key(config, "grid", "config"));
  NumericsConfig numerics = parse_numerics(require_key(config, "numerics", "config"));
  if (const auto env = env_seed_override()) numerics.seed = *env;
  if (!numerics.t_end) throw InputError("numerics.t_end: required for simulate-pde");
  X0Config x0cfg;
  if (config.contains("x0")) x0cfg = parse_x0(config.at("x0"));
  if (config.contains("output")) {
    check_keys(config.at("output"), "output",
               {"snapshots", "metrics", "summary", "snapshot_stride", "metric_stride"});
  }

  const int n = model.n;
  if (gp.profile.components() != n) {
    throw InputError("grid.a: component count does not match the model");
  }

  FieldReaction reaction;
  if (model.kind == ParsedModel::Kind::ring) {
    const RingOscillatorParams params = *model.ring;
    reaction = [params](const MatX& f) { return reaction_field(params, f); };
  } else if (model.kind == ParsedModel::Kind::zero) {
    reaction = [](const MatX& f) { return MatX::Zero(f.rows(), f.cols()); };
  } else {
    throw InputError("simulate-pde: model must be ring_oscillator or zero");
  }

  const double dt = numerics.dt ? *numerics.dt : max_stable_dt(gp.grid, gp.profile);
  const MatX x0 = build_pde_x0(x0cfg, n, gp.grid.cells, numerics.seed);
  const int snapshot_stride = output_int(config, "snapshot_stride", 0);
  const int metric_stride = output_int(config, "metric_stride", 1);

  const PdeRun run =
      simulate_pde(gp.grid, gp.profile, reaction, x0, *numerics.t_end, dt, snapshot_stride,
                   metric_stride);

  // lambda2 per component from the discrete operators
  VecX lambda2s(n);
  for (int k = 0; k < n; ++k) {
    lambda2s[k] = discretize_operator(gp.grid, gp.profile, k).lambda2;
  }

  SyncMetrics metrics;
  metrics.times = run.metric_times;
  metrics.error_norm = run.pi_norm;
  fit_decay_rate(metrics);

  std::string predicted = "n/a";
  if (model.kind == ParsedModel::Kind::ring) {
    const BoxBound bound = box_bound(*model.ring);
    LmiOptions opts;
    opts.seed = numerics.seed;
    CouplingSpec coupling = CouplingSpec::all(n);
    CertifyResult res = certify_secant_diagonal(bound, lambda2s, coupling, opts);
    if (!res.feasible()) res = certify_box(bound, lambda2s, coupling, opts);
    if (res.feasible()) {
      metrics.predicted_rate = predicted_rate(*res.certificate);
      predicted = format_g17(metrics.predicted_rate);
    }
  }

  {
    auto f = open_out(out_path(out_dir, output_name(config, "snapshots", "fields.csv")));
    write_field_csv(f, run, gp.grid);
  }
  {
    auto f = open_out(out_path(out_dir, output_name(config, "metrics", "pi_norm.csv")));
    write_pi_norm_csv(f, run);
  }

  const int last = static_cast<int>(run.component_means.rows()) - 1;
  std::ostringstream summary;
  summary << "cells = " << gp.grid.cells << ", dt = " << format_g17(dt)
          << ", max admissible dt = " << format_g17(max_stable_dt(gp.grid, gp.profile)) << "\n";
  summary << "lambda2 (discrete elliptic):";
  for (int k = 0; k < n; ++k) summary << " " << format_g17(lambda2s[k]);
  summary << "\n";
  summary << "mean drift per component:";
  for (int k = 0; k < n; ++k) {
    summary << " " << format_g17(std::abs(run.component_means(last, k) - run.component_means(0, k)));
  }
  summary << "\n";
  summary << "fitted decay rate of |pi{x}| = "
          << (metrics.fit_valid ? format_g17(metrics.fitted_rate) : "n/a")
          << (metrics.floored ? " (floored)" : "") << "\n";
  summary << "predicted decay rate = " << predicted << "\n";
  std::cout << summary.str();
  auto f = open_out(out_path(out_dir, output_name(config, "summary", "summary.txt")));
  f << summary.str();
  return 0;
}

int run_eig(const Json& config, const std::string& out_dir) {
  check_keys(config, "config", {"graphs", "model", "grid", "output"});
  if (config.contains("output")) check_keys(config.at("output"), "output", {"table"});

  struct Row {
    int component;
    double lambda2;
    std::string source;
  };
  std::vector<Row> rows;

  if (config.contains("model")) {
    const ParsedModel model = parse_model(config.at("model"));
    if (model.kind != ParsedModel::Kind::ring || !model.has_graphs) {
      throw InputError("eig: model must be a ring_oscillator with graphs");
    }
    const NetworkModel net = build_network(*model.ring, model.graphs);
    const VecX l2 = net.lambda2s();
    for (int k = 0; k < model.n; ++k) rows.push_back({k + 1, l2[k], "graph"});
  }
  if (config.contains("graphs")) {
    const Json& graphs = config.at("graphs");
    if (!graphs.is_array()) throw InputError("graphs: expected an array");
    for (std::size_t k = 0; k < graphs.size(); ++k) {
      const ComponentGraph g = parse_graph(graphs[k], "graphs[" + std::to_string(k) + "]");
      rows.push_back({static_cast<int>(k) + 1, build_laplacian(g).lambda2, "graph"});
    }
  }
  if (config.contains("grid")) {
    const GridProfile gp = parse_grid_profile(config.at("grid"));
    for (int k = 0; k < gp.profile.components(); ++k) {
      rows.push_back({k + 1, discretize_operator(gp.grid, gp.profile, k).lambda2, "elliptic"});
    }
  }
  if (rows.empty()) {
    throw InputError("eig: provide \"graphs\", \"model\" or \"grid\"");
  }

  std::ostringstream table;
  table << "component,lambda2,source\n";
  for (const Row& r : rows) {
    table << r.component << "," << format_g17(r.lambda2) << "," << r.source << "\n";
  }
  std::cout << table.str();
  auto f = open_out(out_path(out_dir, output_name(config, "table", "lambda2.csv")));
  f << table.str();
  return 0;
}

int run_sweep(const Json& config, const std::string& out_dir) {
  check_keys(config, "config", {"sweep", "output"});
  const Json& sw = require_key(config, "sweep", "config");
  check_keys(sw, "sweep",
             {"draws", "n", "eta_range", "alphabeta_range", "lambda2_range", "exclude_band",
              "seed"});
  const int draws = get_int(require_key(sw, "draws", "sweep"), "sweep.draws");
  if (draws < 0) throw InputError("sweep.draws: must be nonnegative");
  int n = 3;
  if (sw.contains("n")) n = get_int(sw.at("n"), "sweep.n");
  if (n < 3) throw InputError("sweep.n: need at least three stages");
  auto range = [&](const char* key, double lo, double hi) -> std::pair<double, double> {
    if (!sw.contains(key)) return {lo, hi};
    const VecX r = get_vector(sw.at(key), std::string("sweep.") + key);
    if (r.size() != 2 || !(r[0] <= r[1])) throw InputError(std::string("sweep.") + key + ": expected [lo, hi]");
    return {r[0], r[1]};
  };
  const auto eta_r = range("eta_range", 0.5, 2.0);
  const auto ab_r = range("alphabeta_range", 0.5, 4.0);
  const auto l2_r = range("lambda2_range", 0.0, 2.0);
  double band = 0.4;
  if (sw.contains("exclude_band")) band = get_number(sw.at("exclude_band"), "sweep.exclude_band");
  std::uint64_t seed = 0;
  if (sw.contains("seed")) seed = sw.at("seed").get<std::uint64_t>();
  if (const auto env = env_seed_override()) seed = *env;
  if (config.contains("output")) check_keys(config.at("output"), "output", {"csv"});

  std::ostringstream csv;
  csv << "draw";
  for (int k = 1; k <= n; ++k) csv << ",eta_" << k;
  for (int k = 1; k <= n; ++k) csv << ",alphabeta_" << k;
  for (int k = 1; k <= n; ++k) csv << ",lambda2_" << k;
  csv << ",ratio,threshold,secant_pass,lmi_feasible,agree\n";

  int kept = 0;
  int agreements = 0;
  long attempt = 0;
  const long attempt_cap = 10000L * std::max(draws, 1) + 100;
  while (kept < draws) {
    if (++attempt > attempt_cap) {
      throw InputError("sweep: exclusion band leaves too few admissible draws");
    }
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
    VecX eta(n), ab(n), l2(n);
    for (int k = 0; k < n; ++k) eta[k] = rng.uniform(eta_r.first, eta_r.second);
    for (int k = 0; k < n; ++k) ab[k] = rng.uniform(ab_r.first, ab_r.second);
    for (int k = 0; k < n; ++k) l2[k] = rng.uniform(l2_r.first, l2_r.second);

    const SecantResult sec = secant_criterion(eta, ab, l2);
    if (std::abs(sec.ratio - sec.threshold) <= band) continue;
    ++kept;

    // alpha carries the product; beta = 1 leaves the box bound unchanged
    const RingOscillatorParams params =
        RingOscillatorParams::validated(n, eta, ab, VecX::Ones(n), VecX::Zero(n));
    LmiOptions opts;
    opts.seed = mix_seed(seed, static_cast<std::uint64_t>(attempt) ^ 0xABCDull);
    const CertifyResult res =
        certify_box(box_bound(params), l2, CouplingSpec::all(n), opts);
    const bool agree = (sec.pass == res.feasible());
    agreements += agree ? 1 : 0;

    csv << attempt;
    for (int k = 0; k < n; ++k) csv << "," << format_g17(eta[k]);
    for (int k = 0; k < n; ++k) csv << "," << format_g17(ab[k]);
    for (int k = 0; k < n; ++k) csv << "," << format_g17(l2[k]);
    csv << "," << format_g17(sec.ratio) << "," << format_g17(sec.threshold) << ","
        << (sec.pass ? 1 : 0) << "," << (res.feasible() ? 1 : 0) << "," << (agree ? 1 : 0)
        << "\n";
  }

  auto f = open_out(out_path(out_dir, output_name(config, "csv", "sweep.csv")));
  f << csv.str();
  std::cout << "sweep: " << kept << " draws, secant/LMI agreement " << agreements << "/" << kept
            << "\n";
  return 0;
}

}  // namespace syncert
