#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "incfl/network.hpp"
#include "incfl/routing.hpp"

namespace incfl {

// Experiment scenario: a grid of edge nodes inside a square area, users
// placed uniformly over the union of edge coverage disks.
//
// Config file format: flat key=value lines, '#' comments. Recognized keys:
//   area_m, grid, radius_m, K, model, D_mb, bfr_gbps, bbk_gbps, wd_gbps,
//   wu_gbps, allow_direct_cloud, seed, trials
// Unknown keys are rejected. `model` and `D_mb` are mutually exclusive.
struct ScenarioConfig {
  double area_m = 500.0;
  int grid = 3;  // grid x grid edge nodes
  double radius_m = 150.0;
  int users = 1000;  // K
  std::string model = "ResNet152";
  double model_mb = 0.0;  // explicit size; 0 means look up `model`
  double bfr_gbps = 1.0;
  double bbk_gbps = 1.0;
  double wd_gbps = 2.0;
  double wu_gbps = 2.0;
  bool allow_direct_cloud = true;
  std::uint64_t seed = 1;
  int trials = 16;

  double model_size_mb() const;
};

// Published model sizes in MB.
const std::map<std::string, double>& model_catalog();

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

// Edge nodes on an equal-margin grid lattice, K users rejection-sampled
// uniformly over the covered part of the area. Deterministic per seed.
Topology generate_topology(const ScenarioConfig& config, std::uint64_t seed);
inline Topology generate_topology(const ScenarioConfig& config) {
  return generate_topology(config, config.seed);
}

struct ExperimentResult {
  std::string scenario_id;
  std::string method;  // only_cloud | non_inc | inc | inc_lb
  int users = 0;
  double model_mb = 0.0;
  double objective_s = 0.0;
  double lp_lower_bound_s = 0.0;
  double bound_factor = 0.0;
  double cloud_rx_bytes = 0.0;
  std::uint64_t cloud_agg_inputs = 0;
  std::uint64_t seed = 0;
  std::int64_t wallclock_ms = 0;
  // Audit trail: association columns, kept in memory for small rounds only
  // (K <= 100); larger rounds are regenerated from the recorded seed.
  std::vector<int> association;
};

// All four methods (Only Cloud, Non-INC, INC, INC lower bound) on one
// topology draw.
std::vector<ExperimentResult> run_point(const ScenarioConfig& config, int users,
                                        double model_mb, std::uint64_t point_seed);

// Latency vs number of users (four rows per K).
std::vector<ExperimentResult> run_latency_sweep(const ScenarioConfig& config,
                                                const std::vector<int>& k_values,
                                                int jobs = 1);

// Latency vs model size at fixed K.
std::vector<ExperimentResult> run_model_sweep(const ScenarioConfig& config,
                                              const std::vector<std::string>& models,
                                              int jobs = 1);

// Cloud traffic / computing-load counters vs K (three schemes per K).
std::vector<ExperimentResult> run_overhead_sweep(const ScenarioConfig& config,
                                                 const std::vector<int>& k_values,
                                                 int jobs = 1);

void write_csv(std::ostream& out, const std::vector<ExperimentResult>& results);

// Quick oracle-equivalence checks (hierarchical vs star aggregation, LP
// sandwich, objective consistency). Returns true when everything agrees;
// diagnostics go to `out`.
bool run_selftest(std::ostream& out);

}  // namespace incfl
