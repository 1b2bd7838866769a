// incsim: edge-network federated-learning aggregation simulator.
//
// Subcommands:
//   sweep-k         latency of all methods across user counts
//   sweep-model     latency of all methods across model sizes
//   sweep-overhead  cloud traffic / computing-load counters across user counts
//   solve           route a single scenario and print the solution
//   selftest        run the built-in oracle-equivalence checks
//
// Exit codes: 0 success, 2 configuration error, 3 infeasible instance,
// 4 internal error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "incfl/errors.hpp"
#include "incfl/rng.hpp"
#include "incfl/scenario.hpp"

namespace {

using namespace incfl;

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string k_list;
  std::string model_list;
  bool has_seed = false;
  std::uint64_t seed = 0;
  bool has_trials = false;
  int trials = 0;
  int jobs = 1;
};

ScenarioConfig load_config(const CommonOpts& opts) {
  ScenarioConfig cfg =
      opts.config_path.empty() ? ScenarioConfig{} : parse_config_file(opts.config_path);
  if (opts.has_seed) cfg.seed = opts.seed;
  if (opts.has_trials) cfg.trials = opts.trials;
  return cfg;
}

std::vector<int> parse_k_list(const std::string& text) {
  if (text.empty()) return {200, 400, 600, 800, 1000};
  std::vector<int> ks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      ks.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError("bad K value in list: " + item);
    }
    if (ks.back() < 1) throw ConfigError("K values must be positive");
  }
  if (ks.empty()) throw ConfigError("empty K list");
  return ks;
}

std::vector<std::string> parse_model_list(const std::string& text) {
  if (text.empty()) return {"VGG16", "ResNet152", "Xception", "DenseNet121"};
  std::vector<std::string> models;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) models.push_back(item);
  return models;
}

void emit(const std::vector<ExperimentResult>& rows, const std::string& out_path) {
  if (out_path.empty()) {
    write_csv(std::cout, rows);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + out_path);
  write_csv(out, rows);
}

int run_solve(const CommonOpts& opts) {
  const ScenarioConfig cfg = load_config(opts);
  const double d_mb = cfg.model_size_mb();
  const Topology topo = generate_topology(cfg);
  const RoutingInstance inst = make_instance(topo, ModelSize::from_megabytes(d_mb));

  const IncResult inc = solve_inc(inst, mix_seed(cfg.seed, 0xA11CE), cfg.trials);
  const RoutingSolution only_cloud = assign_only_cloud(inst);
  const RoutingSolution non_inc = assign_nearest_edge(inst);

  char buf[128];
  std::snprintf(buf, sizeof(buf), "scenario: K=%d M=%d D=%g MB seed=%llu trials=%d\n",
                cfg.users, topo.num_edges(), d_mb,
                static_cast<unsigned long long>(cfg.seed), cfg.trials);
  std::cout << buf;

  std::cout << "association (users per column, cloud last):";
  for (int c : inc.best.assoc.column_counts()) std::cout << ' ' << c;
  std::cout << '\n';

  auto line = [&](const char* name, double v) {
    std::snprintf(buf, sizeof(buf), "%s: %.9g s\n", name, v);
    std::cout << buf;
  };
  line("inc objective", inc.best.objective);
  line("lp lower bound", inc.lower_bound());
  line("only cloud", only_cloud.objective);
  line("nearest edge", non_inc.objective);
  if (cfg.users >= 2) {
    std::snprintf(buf, sizeof(buf), "approximation bound factor: %.9g\n",
                  theorem2_bound(cfg.users, inc.lower_bound()));
    std::cout << buf;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edge-network federated-learning aggregation simulator"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* cmd, bool sweeps) {
    cmd->add_option("--config", opts.config_path, "scenario config file (key=value)");
    cmd->add_option("--seed", opts.seed, "override the scenario seed")
        ->each([&](const std::string&) { opts.has_seed = true; });
    cmd->add_option("--trials", opts.trials, "rounding trials per solve")
        ->each([&](const std::string&) { opts.has_trials = true; });
    if (sweeps) {
      cmd->add_option("--out", opts.out_path, "CSV output path (default: stdout)");
      cmd->add_option("--jobs", opts.jobs, "worker threads for sweep points");
    }
  };

  CLI::App* sweep_k = app.add_subcommand("sweep-k", "latency vs number of users");
  add_common(sweep_k, true);
  sweep_k->add_option("--k-list", opts.k_list, "comma-separated user counts");

  CLI::App* sweep_model = app.add_subcommand("sweep-model", "latency vs model size");
  add_common(sweep_model, true);
  sweep_model->add_option("--models", opts.model_list, "comma-separated model names");

  CLI::App* sweep_overhead =
      app.add_subcommand("sweep-overhead", "cloud traffic and computing load vs users");
  add_common(sweep_overhead, true);
  sweep_overhead->add_option("--k-list", opts.k_list, "comma-separated user counts");

  CLI::App* solve = app.add_subcommand("solve", "route one scenario and print it");
  add_common(solve, false);

  app.add_subcommand("selftest", "run built-in oracle-equivalence checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep_k->parsed()) {
      emit(run_latency_sweep(load_config(opts), parse_k_list(opts.k_list), opts.jobs),
           opts.out_path);
    } else if (sweep_model->parsed()) {
      emit(run_model_sweep(load_config(opts), parse_model_list(opts.model_list),
                           opts.jobs),
           opts.out_path);
    } else if (sweep_overhead->parsed()) {
      emit(run_overhead_sweep(load_config(opts), parse_k_list(opts.k_list), opts.jobs),
           opts.out_path);
    } else if (solve->parsed()) {
      return run_solve(opts);
    } else {  // selftest
      if (!incfl::run_selftest(std::cout)) {
        std::cerr << "selftest failed\n";
        return 4;
      }
      std::cout << "selftest passed\n";
    }
    return 0;
  } catch (const incfl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const incfl::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
