// Command-line entry point: transform, stats, simulate, estimate, gof, direct.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nonml/csv.hpp"
#include "nonml/direct.hpp"
#include "nonml/error.hpp"
#include "nonml/estimator.hpp"
#include "nonml/gof.hpp"
#include "nonml/io.hpp"
#include "nonml/sampler.hpp"
#include "nonml/statistics.hpp"

#ifndef NONML_VERSION
#define NONML_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace nonml;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInternal = 1;

// Module errors map to 10 + kind so every kind has its own exit code.
int exit_code(ErrorKind kind) { return 10 + static_cast<int>(kind); }

struct RunConfig {
  std::string subcommand;
  std::string manifest;
  std::string spec;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  std::optional<std::uint64_t> burnin;
  std::optional<std::uint64_t> thin;
  std::optional<std::size_t> samples;
};

struct RunLog {
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
}

template <class T>
T field(const json& node, const char* key, T fallback) {
  if (!node.is_object() || !node.contains(key) || node[key].is_null()) return fallback;
  try {
    return node[key].get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::Parse, std::string("spec field '") + key + "' has the wrong type");
  }
}

template <class T>
std::optional<T> optional_field(const json& node, const char* key) {
  if (!node.is_object() || !node.contains(key) || node[key].is_null()) return std::nullopt;
  return field<T>(node, key, T{});
}

StatisticId parse_statistic(const json& node) {
  if (node.is_string()) return make_statistic(node.get<std::string>());
  if (!node.is_object() || !node.contains("name")) throw Error(ErrorKind::Parse, "statistic entries need a 'name'");
  return make_statistic(node["name"].get<std::string>(), field<double>(node, "lambda", 2.0));
}

std::vector<StatisticId> parse_statistics(const json& node) {
  const json& list = node.is_object() && node.contains("statistics") ? node["statistics"] : node;
  if (!list.is_array()) throw Error(ErrorKind::Parse, "statistics must be a JSON array");
  std::vector<StatisticId> out;
  for (const auto& entry : list) out.push_back(parse_statistic(entry));
  if (out.empty()) throw Error(ErrorKind::InvalidParameter, "no statistics requested");
  return out;
}

ModelSpec parse_model(const json& doc) {
  if (!doc.is_object() || !doc.contains("effects") || !doc["effects"].is_array()) {
    throw Error(ErrorKind::Parse, "model spec needs an 'effects' array");
  }
  ModelSpec spec;
  for (const auto& e : doc["effects"]) spec.effects.push_back({parse_statistic(e), field<double>(e, "theta", 0.0)});
  if (doc.contains("free_layers")) {
    spec.free_layers.clear();
    for (const auto& l : doc["free_layers"]) spec.free_layers.push_back(parse_layer(l.get<std::string>()));
  }
  return spec;
}

json model_to_json(const json& original, const ModelSpec& spec) {
  json doc = original;
  doc["effects"] = json::array();
  for (const auto& e : spec.effects) doc["effects"].push_back({{"name", e.id.name}, {"lambda", e.id.lambda}, {"theta", e.theta}});
  return doc;
}

std::uint64_t require_seed(const RunConfig& cfg, const json& spec) {
  if (cfg.seed) return *cfg.seed;
  if (auto s = optional_field<std::uint64_t>(spec, "seed")) return *s;
  throw Error(ErrorKind::InvalidParameter, cfg.subcommand + " requires a seed (--seed or spec field 'seed')");
}

void write_output(const RunConfig& cfg, RunLog& log, const std::string& name, const std::string& text) {
  csv::write_text(fs::path(cfg.out) / name, text);
  log.outputs.push_back(name);
}

void require(const std::string& value, const char* flag, const std::string& subcommand) {
  if (value.empty()) throw Error(ErrorKind::InvalidParameter, subcommand + " requires " + flag);
}

void cmd_transform(const RunConfig& cfg, RunLog& log) {
  require(cfg.manifest, "--manifest", cfg.subcommand);
  const auto result = run_manifest(load_manifest(cfg.manifest));
  write_network(result.network, cfg.out);
  for (const char* f : {"W.csv", "Y.csv", "Q.csv", "D.csv", "pairs.json"}) log.outputs.push_back(f);
  if (result.dropped_edges > 0) {
    log.warnings.push_back(std::to_string(result.dropped_edges) + " report edges outside the pair list were dropped (" +
                           std::to_string(result.dropped_pairs) + " distinct pairs)");
  }
}

void cmd_stats(const RunConfig& cfg, RunLog& log) {
  require(cfg.manifest, "--manifest", cfg.subcommand);
  require(cfg.spec, "--spec", cfg.subcommand);
  const auto ids = parse_statistics(read_json(cfg.spec));
  const auto net = load_network(cfg.manifest);
  std::ostringstream out;
  out << "statistic,value\n";
  for (const auto& e : compute_statistics(net, ids)) out << csv::escape(gof_label(e.id)) << ',' << csv::format_number(e.value) << '\n';
  write_output(cfg, log, "stats.csv", out.str());
}

SimulationOptions simulation_options(const RunConfig& cfg, const json& spec) {
  SimulationOptions opts;
  opts.seed = require_seed(cfg, spec);
  opts.burnin = cfg.burnin ? cfg.burnin : optional_field<std::uint64_t>(spec, "burnin");
  opts.thin = cfg.thin ? cfg.thin : optional_field<std::uint64_t>(spec, "thin");
  opts.samples = cfg.samples.value_or(field<std::size_t>(spec, "M", 1000));
  opts.chains = field<std::size_t>(spec, "chains", 1);
  opts.threads = cfg.threads;
  return opts;
}

void cmd_simulate(const RunConfig& cfg, RunLog& log) {
  require(cfg.manifest, "--manifest", cfg.subcommand);
  require(cfg.spec, "--spec", cfg.subcommand);
  const json doc = read_json(cfg.spec);
  const ModelSpec spec = parse_model(doc);
  const auto net = load_network(cfg.manifest);
  const auto batch = simulate(net, spec, simulation_options(cfg, doc));
  std::ostringstream out;
  for (std::size_t k = 0; k < spec.effects.size(); ++k) out << (k ? "," : "") << csv::escape(gof_label(spec.effects[k].id));
  out << '\n';
  for (std::size_t r = 0; r < batch.stat_matrix.rows; ++r) {
    for (std::size_t k = 0; k < batch.stat_matrix.cols; ++k) out << (k ? "," : "") << csv::format_number(batch.stat_matrix(r, k));
    out << '\n';
  }
  write_output(cfg, log, "stat_matrix.csv", out.str());
  log.warnings.insert(log.warnings.end(), batch.warnings.begin(), batch.warnings.end());
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void cmd_estimate(const RunConfig& cfg, RunLog& log) {
  require(cfg.manifest, "--manifest", cfg.subcommand);
  require(cfg.spec, "--spec", cfg.subcommand);
  const json doc = read_json(cfg.spec);
  ModelSpec spec = parse_model(doc);
  const auto net = load_network(cfg.manifest);
  const json est = doc.contains("estimation") ? doc["estimation"] : json::object();
  EstimationOptions opts;
  opts.seed = require_seed(cfg, doc);
  opts.burnin = cfg.burnin ? cfg.burnin : optional_field<std::uint64_t>(doc, "burnin");
  opts.thin = cfg.thin ? cfg.thin : optional_field<std::uint64_t>(doc, "thin");
  opts.phase1_samples = field<std::size_t>(est, "phase1_samples", opts.phase1_samples);
  opts.subphases = field<std::size_t>(est, "subphases", opts.subphases);
  opts.initial_gain = field<double>(est, "initial_gain", opts.initial_gain);
  opts.phase2_multiplier = field<double>(est, "phase2_multiplier", opts.phase2_multiplier);
  opts.phase2_extra = field<std::size_t>(est, "phase2_extra", opts.phase2_extra);
  opts.phase2_steps = optional_field<std::uint64_t>(est, "phase2_steps");
  opts.max_step = field<double>(est, "max_step", opts.max_step);
  opts.phase3_samples = cfg.samples.value_or(field<std::size_t>(est, "phase3_samples", opts.phase3_samples));
  opts.convergence_threshold = field<double>(est, "convergence_threshold", opts.convergence_threshold);
  opts.max_restarts = field<std::size_t>(est, "max_restarts", opts.max_restarts);
  opts.throw_on_nonconvergence = field<bool>(est, "require_convergence", false);
  opts.chains = field<std::size_t>(doc, "chains", 1);
  opts.threads = cfg.threads;

  const FitResult fit = fit_mom(net, spec, opts);
  json out;
  out["converged"] = fit.converged;
  out["restarts"] = fit.restarts;
  out["effects"] = json::array();
  std::ostringstream table;
  table << "effect,parameter,stderr,significant\n";
  for (std::size_t k = 0; k < fit.ids.size(); ++k) {
    const std::string label = gof_label(fit.ids[k]);
    const bool significant = std::abs(fit.theta_hat[k]) > 2 * fit.std_errors[k];
    out["effects"].push_back({{"name", fit.ids[k].name},
                              {"lambda", fit.ids[k].lambda},
                              {"theta_hat", number_or_null(fit.theta_hat[k])},
                              {"std_error", number_or_null(fit.std_errors[k])},
                              {"conv_t_ratio", number_or_null(fit.conv_t_ratios[k])},
                              {"observed", number_or_null(fit.observed[k])},
                              {"sim_mean", number_or_null(fit.sim_mean[k])},
                              {"sim_sd", number_or_null(fit.sim_sd[k])}});
    table << csv::escape(label) << ',' << csv::format_number(fit.theta_hat[k]) << ','
          << csv::format_number(fit.std_errors[k]) << ',' << (significant ? 1 : 0) << '\n';
    spec.effects[k].theta = fit.theta_hat[k];
  }
  json info = json::array();
  for (std::size_t a = 0; a < fit.info_matrix.rows; ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < fit.info_matrix.cols; ++b) row.push_back(number_or_null(fit.info_matrix(a, b)));
    info.push_back(row);
  }
  out["info_matrix"] = info;
  out["phase_log"] = fit.phase_log;
  write_output(cfg, log, "fit.json", out.dump(2) + "\n");
  write_output(cfg, log, "estimates.csv", table.str());
  write_output(cfg, log, "fitted_spec.json", model_to_json(doc, spec).dump(2) + "\n");
  if (!fit.converged) log.warnings.push_back("estimation did not reach the convergence threshold");
}

void cmd_gof(const RunConfig& cfg, RunLog& log) {
  require(cfg.manifest, "--manifest", cfg.subcommand);
  require(cfg.spec, "--spec", cfg.subcommand);
  const json doc = read_json(cfg.spec);
  const ModelSpec spec = parse_model(doc);
  const auto net = load_network(cfg.manifest);
  const json g = doc.contains("gof") ? doc["gof"] : json::object();
  const auto aux = g.contains("aux") ? parse_statistics(g["aux"]) : default_gof_statistics(spec);
  const auto sim = simulation_options(cfg, doc);
  GofOptions opts;
  opts.samples = sim.samples;
  opts.seed = sim.seed;
  opts.burnin = sim.burnin;
  opts.thin = sim.thin;
  opts.chains = sim.chains;
  opts.threads = sim.threads;
  opts.include_summary = field<bool>(g, "include_summary", true);
  const auto table = gof(net, spec, aux, opts);
  write_output(cfg, log, "gof.csv", format_gof_csv(table));
  log.warnings.insert(log.warnings.end(), table.warnings.begin(), table.warnings.end());
}

void cmd_direct(const RunConfig& cfg, RunLog& log) {
  require(cfg.manifest, "--manifest", cfg.subcommand);
  const Manifest manifest = load_manifest(cfg.manifest);
  const ReportSet reports = load_reports(manifest.reports, manifest.universe);
  const LabeledGraph social = load_graph(manifest.social.path, manifest.social.format, reports.reporters())
                                  .reordered(reports.reporters());
  const BinaryMatrix& y = social.adjacency();
  const auto& names = reports.reporters();

  std::ostringstream multiplex;
  multiplex << "reporter_i,reporter_j,entrainment,exchange,entrainment_gated,exchange_gated\n";
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (i == j) continue;
      multiplex << csv::escape(names[i]) << ',' << csv::escape(names[j]);
      for (bool gated : {false, true})
        for (auto kind : {MultiplexKind::Entrainment, MultiplexKind::Exchange})
          multiplex << ',' << csv::format_number(multiplex_statistic(reports, y, {kind, i, j, gated}));
      multiplex << '\n';
    }
  write_output(cfg, log, "multiplex.csv", multiplex.str());

  if (cfg.spec.empty()) return;
  const json doc = read_json(cfg.spec);
  if (!doc.contains("alaam")) return;
  const double theta0 = field<double>(doc["alaam"], "theta0", 0.0);
  const double theta1 = field<double>(doc["alaam"], "theta1", 0.0);
  const auto& universe = reports.universe();
  std::ostringstream alaam;
  alaam << "pair,reporter,observed,probability\n";
  for (std::size_t u = 0; u < universe.size(); ++u)
    for (std::size_t v = u + 1; v < universe.size(); ++v) {
      const std::string pair = universe[u] < universe[v] ? universe[u] + "|" + universe[v] : universe[v] + "|" + universe[u];
      for (std::size_t i = 0; i < names.size(); ++i) {
        alaam << csv::escape(pair) << ',' << csv::escape(names[i]) << ',' << int(reports(i, u, v)) << ','
              << csv::format_number(alaam_conditional_probability(reports, y, u, v, i, theta0, theta1)) << '\n';
      }
    }
  write_output(cfg, log, "alaam.csv", alaam.str());
}

void write_run_log(const RunConfig& cfg, const RunLog& log, double seconds, int code, const std::string& kind,
                   const std::string& message) {
  json doc;
  doc["subcommand"] = cfg.subcommand;
  doc["config"] = {{"manifest", cfg.manifest},
                   {"spec", cfg.spec},
                   {"out", cfg.out},
                   {"seed", cfg.seed ? json(*cfg.seed) : json(nullptr)},
                   {"threads", cfg.threads},
                   {"burnin", cfg.burnin ? json(*cfg.burnin) : json(nullptr)},
                   {"thin", cfg.thin ? json(*cfg.thin) : json(nullptr)},
                   {"samples", cfg.samples ? json(*cfg.samples) : json(nullptr)}};
  doc["versions"] = {{"nonml", NONML_VERSION}, {"cli11", CLI11_VERSION}, {"compiler", __VERSION__},
                     {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  doc["wall_time_s"] = seconds;
  doc["status"] = code == 0 ? "ok" : "error";
  doc["exit_code"] = code;
  doc["error"] = code == 0 ? json(nullptr) : json{{"kind", kind}, {"message", message}};
  doc["outputs"] = log.outputs;
  doc["warnings"] = log.warnings;
  try {
    fs::create_directories(cfg.out);
    std::ofstream(fs::path(cfg.out) / "run_log.json") << doc.dump(2) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "nonml: cannot write run log: " << e.what() << '\n';
  }
}

// Recovers --out from raw arguments so a run log is written even when
// argument parsing itself fails.
std::string scan_out(int argc, char** argv) {
  for (int k = 1; k < argc; ++k) {
    const std::string arg = argv[k];
    if (arg == "--out" && k + 1 < argc) return argv[k + 1];
    if (arg.rfind("--out=", 0) == 0) return arg.substr(6);
  }
  return ".";
}

}  // namespace

int main(int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();
  RunConfig cfg;
  RunLog log;
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  CLI::App app{"Multilevel network toolkit: transform reports, compute statistics, simulate, estimate and assess fit"};
  app.set_version_flag("--version", NONML_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--manifest", cfg.manifest, "Manifest JSON, or a directory written by transform");
  app.add_option("--spec", cfg.spec, "Statistic list or model specification JSON");
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Master random seed");
  auto* threads = app.add_option("--threads", cfg.threads, "Maximum concurrently running chains");
  app.add_option("--burnin", cfg.burnin, "Burn-in steps");
  app.add_option("--thin", cfg.thin, "Steps between recorded states");
  app.add_option("--samples", cfg.samples, "Number of recorded states");
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"transform", "Build W, Y, Q and D from a manifest"},
      {"stats", "Compute statistics of a network"},
      {"simulate", "Simulate from a model and record statistics"},
      {"estimate", "Fit a model by stochastic approximation"},
      {"gof", "Goodness of fit by simulation"},
      {"direct", "Multiplex statistics and ALAAM probabilities"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    cfg.out = scan_out(argc, argv);
    cfg.subcommand = argc > 1 ? argv[1] : "";
    write_run_log(cfg, log, elapsed(), kExitUsage, "Usage", e.what());
    return kExitUsage;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (threads->count() == 0) {
    if (const char* env = std::getenv("NONML_THREADS")) {
      try {
        cfg.threads = std::stoul(env);
      } catch (const std::exception&) {
        std::cerr << "nonml: ignoring invalid NONML_THREADS='" << env << "'\n";
      }
    }
  }
  if (cfg.threads == 0) cfg.threads = 1;

  int code = 0;
  std::string kind, message;
  try {
    fs::create_directories(cfg.out);
    if (cfg.subcommand == "transform") cmd_transform(cfg, log);
    else if (cfg.subcommand == "stats") cmd_stats(cfg, log);
    else if (cfg.subcommand == "simulate") cmd_simulate(cfg, log);
    else if (cfg.subcommand == "estimate") cmd_estimate(cfg, log);
    else if (cfg.subcommand == "gof") cmd_gof(cfg, log);
    else if (cfg.subcommand == "direct") cmd_direct(cfg, log);
  } catch (const Error& e) {
    code = exit_code(e.kind());
    kind = std::string(to_string(e.kind()));
    message = e.what();
  } catch (const std::exception& e) {
    code = kExitInternal;
    kind = "Internal";
    message = e.what();
  }
  for (const auto& w : log.warnings) std::cerr << "nonml: warning: " << w << '\n';
  if (code != 0) std::cerr << "nonml: " << kind << " error: " << message << '\n';
  write_run_log(cfg, log, elapsed(), code, kind, message);
  return code;
}
