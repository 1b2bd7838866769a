#pragma once

#include <cstdint>
#include <vector>

#include "incfl/network.hpp"

namespace incfl {

// One routing problem: a topology, a model size and the users selected for
// this learning round.
struct RoutingInstance {
  Topology topo;
  ModelSize size;
  std::vector<int> selected_users;  // topology user ids, one matrix row each

  int rows() const { return static_cast<int>(selected_users.size()); }
};

// Convenience: a round that selects every user of the topology.
RoutingInstance make_instance(Topology topo, ModelSize size);

// Optimal fractional association from the relaxed min-latency program,
// together with the latency lower bound y-dagger and the per-edge
// edge-to-cloud terms at the fractional loads.
struct FractionalSolution {
  int num_edges = 0;
  bool has_cloud_column = false;
  std::vector<double> assoc;  // rows x columns, row-major, rows sum to 1
  double latency_bound = 0.0;           // y-dagger, seconds
  std::vector<double> edge_to_cloud_s;  // per edge

  int num_columns() const { return num_edges + (has_cloud_column ? 1 : 0); }
  int rows() const {
    return num_columns() == 0 ? 0 : static_cast<int>(assoc.size()) / num_columns();
  }
  double at(int r, int c) const {
    return assoc[static_cast<std::size_t>(r) * num_columns() + c];
  }
};

struct RoutingSolution {
  Association assoc;
  RateAllocation rates;
  double objective = 0.0;  // seconds
  bool uses_ina = true;    // nearest-edge baseline runs with plain backhaul
};

// Result of the relax-and-round pipeline: the best rounded solution plus the
// relaxation it was rounded from.
struct IncResult {
  RoutingSolution best;
  FractionalSolution relaxation;
  double lower_bound() const { return relaxation.latency_bound; }
};

// Fair-share rates: every user on a column gets capacity / occupancy. This
// minimizes the column's slowest-user latency for a fixed association.
RateAllocation recover_rates(const Association& assoc, const Topology& topo);

// Round latency of an association under fair-share rates and in-network
// aggregation: max over columns of D|K_m|/B_fr_m + min{D/B_bk_m, D|K_m|/B_bk_m}.
// Matches total_latency(assoc, recover_rates(assoc), ina=true) bit for bit.
double p2_objective(const Association& assoc, const RoutingInstance& instance);

// Solves the linear relaxation of the routing problem exactly and
// deterministically. Throws InfeasibleError naming a user that cannot reach
// any allowed column.
FractionalSolution solve_lp_p4(const RoutingInstance& instance);

// One randomized-rounding pass: a binary input is returned verbatim;
// otherwise each row independently samples one column with the row's
// probabilities. Reproducible for a fixed seed.
RoutingSolution randomized_round(const FractionalSolution& frac,
                                 const RoutingInstance& instance,
                                 std::uint64_t rng_seed);

// Seed for rounding trial `index` under master seed `seed`; parallel and
// serial trial execution agree through this.
std::uint64_t derive_trial_seed(std::uint64_t seed, std::uint64_t index);

// Relax once, round num_rounding_trials times, keep the lowest objective.
IncResult solve_inc(const RoutingInstance& instance, std::uint64_t rng_seed,
                    int num_rounding_trials);

// Exhaustive minimizer over all feasible associations; oracle for small
// instances. Ties broken toward the lexicographically smallest assignment
// (lowest column indices first). Guarded against instances with more than
// 1e7 candidate associations.
RoutingSolution solve_bruteforce(const RoutingInstance& instance);

// Baseline: every user uploads straight to the cloud over its shared
// hypothetical uplink. Requires allow_direct_cloud.
RoutingSolution assign_only_cloud(const RoutingInstance& instance);

// Baseline: every user joins its geometrically nearest reachable edge
// (lowest index on ties) and edges forward models without aggregation.
RoutingSolution assign_nearest_edge(const RoutingInstance& instance);

// Approximation factor (2 ln K) / y_dagger + 3 of the rounding guarantee.
double theorem2_bound(double num_users, double y_dagger);

}  // namespace incfl
