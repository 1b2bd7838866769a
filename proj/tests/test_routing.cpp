#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "incfl/errors.hpp"
#include "incfl/rng.hpp"
#include "incfl/routing.hpp"

using namespace incfl;

namespace {

Topology uniform_topology(int edges, int users, bool direct_cloud = false) {
  Topology t;
  t.fronthaul_bps.assign(edges, 1.0e9);
  t.backhaul_bps.assign(edges, 1.0e9);
  t.downlink_bps = 2.0e9;
  t.cloud_uplink_bps = 2.0e9;
  t.allow_direct_cloud = direct_cloud;
  t.reachable.assign(users, std::vector<bool>(edges, true));
  return t;
}

const ModelSize kResNet = ModelSize::from_megabytes(232.0);

RoutingInstance uniform_instance(int edges, int users, bool direct_cloud = false) {
  return make_instance(uniform_topology(edges, users, direct_cloud), kResNet);
}

// A random small instance where every user reaches at least one column.
RoutingInstance random_instance(std::mt19937_64& rng) {
  const int edges = 1 + static_cast<int>(rng() % 3);
  const int users = 2 + static_cast<int>(rng() % 5);
  Topology t;
  t.fronthaul_bps.resize(edges);
  t.backhaul_bps.resize(edges);
  for (double& b : t.fronthaul_bps) b = (0.2 + uniform01(rng)) * 1e9;
  for (double& b : t.backhaul_bps) b = (0.2 + uniform01(rng)) * 1e9;
  t.downlink_bps = 2.0e9;
  t.cloud_uplink_bps = (0.5 + uniform01(rng)) * 2e9;
  t.allow_direct_cloud = rng() % 2 == 0;
  t.reachable.assign(users, std::vector<bool>(edges, false));
  for (int u = 0; u < users; ++u) {
    for (int m = 0; m < edges; ++m) t.reachable[u][m] = rng() % 3 != 0;
    if (!t.allow_direct_cloud) t.reachable[u][rng() % edges] = true;
  }
  return make_instance(std::move(t), ModelSize::from_megabytes(10.0 + uniform01(rng) * 300.0));
}

}  // namespace

TEST_CASE("fair-share rates split the column capacity evenly") {
  RoutingInstance inst = uniform_instance(2, 3, true);
  Association a;
  a.num_edges = 2;
  a.has_cloud_column = true;
  a.column_of = {0, 0, 2};
  RateAllocation r = recover_rates(a, inst.topo);
  CHECK(r.at(0, 0) == doctest::Approx(0.5e9).epsilon(1e-15));
  CHECK(r.at(1, 0) == doctest::Approx(0.5e9).epsilon(1e-15));
  CHECK(r.at(2, 2) == doctest::Approx(2.0e9).epsilon(1e-15));
  CHECK(r.at(0, 1) == 0.0);
  CHECK(r.at(2, 0) == 0.0);
}

TEST_CASE("round objective for a single user on one edge") {
  RoutingInstance inst = uniform_instance(1, 1);
  Association a;
  a.num_edges = 1;
  a.column_of = {0};
  CHECK(p2_objective(a, inst) == doctest::Approx(3.712).epsilon(1e-12));
}

TEST_CASE("round objective with five users sharing one edge") {
  RoutingInstance inst = uniform_instance(1, 5);
  Association a;
  a.num_edges = 1;
  a.column_of.assign(5, 0);
  // Fronthaul 5 * 1.856 = 9.28, plus a single aggregated backhaul upload.
  CHECK(p2_objective(a, inst) == doctest::Approx(11.136).epsilon(1e-12));
}

TEST_CASE("round objective equals the full latency report exactly") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    RoutingInstance inst = random_instance(rng);
    Association a;
    a.num_edges = inst.topo.num_edges();
    a.has_cloud_column = inst.topo.allow_direct_cloud;
    a.column_of.resize(inst.rows());
    for (int r = 0; r < inst.rows(); ++r) {
      std::vector<int> cols;
      for (int m = 0; m < a.num_edges; ++m)
        if (inst.topo.reachable[inst.selected_users[r]][m]) cols.push_back(m);
      if (a.has_cloud_column) cols.push_back(a.num_edges);
      a.column_of[r] = cols[rng() % cols.size()];
    }
    RateAllocation rates = recover_rates(a, inst.topo);
    LatencyReport rep = total_latency(a, rates, inst.size, inst.topo, true);
    CHECK(p2_objective(a, inst) == rep.total_s);  // bit-identical, not approximate
  }
}

TEST_CASE("relaxation bound for the single-user single-edge chain") {
  FractionalSolution f = solve_lp_p4(uniform_instance(1, 1));
  CHECK(f.latency_bound == doctest::Approx(3.712).epsilon(1e-9));
  CHECK(f.at(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("relaxation of a symmetric two-edge instance balances the load") {
  FractionalSolution f = solve_lp_p4(uniform_instance(2, 2));
  // One user per edge: fronthaul 1.856 plus one backhaul upload per edge.
  CHECK(f.latency_bound == doctest::Approx(3.712).epsilon(1e-9));
  CHECK(f.at(0, 0) + f.at(0, 1) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f.at(1, 0) + f.at(1, 1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("relaxation throws when a user is stranded") {
  Topology t = uniform_topology(2, 2);
  t.reachable[1] = {false, false};
  RoutingInstance inst = make_instance(std::move(t), kResNet);
  CHECK_THROWS_AS(solve_lp_p4(inst), InfeasibleError);
  CHECK_THROWS_AS(solve_bruteforce(inst), InfeasibleError);
}

TEST_CASE("relaxation bound never exceeds the exact optimum") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 80; ++trial) {
    RoutingInstance inst = random_instance(rng);
    FractionalSolution f = solve_lp_p4(inst);
    RoutingSolution opt = solve_bruteforce(inst);
    CHECK(f.latency_bound <= opt.objective * (1.0 + 1e-9) + 1e-9);

    // Any rounding of the relaxation is at best the exact optimum.
    RoutingSolution rounded = randomized_round(f, inst, rng());
    CHECK(rounded.objective >= opt.objective * (1.0 - 1e-9) - 1e-9);
  }
}

TEST_CASE("a binary relaxation rounds to itself for any seed") {
  FractionalSolution f;
  f.num_edges = 2;
  f.assoc = {1.0, 0.0, 0.0, 1.0, 1.0, 0.0};
  RoutingInstance inst = uniform_instance(2, 3);
  for (std::uint64_t seed : {0ull, 1ull, 999ull}) {
    RoutingSolution sol = randomized_round(f, inst, seed);
    CHECK(sol.assoc.column_of == std::vector<int>{0, 1, 0});
  }
}

TEST_CASE("an even two-way split rounds each way about half the time") {
  FractionalSolution f;
  f.num_edges = 2;
  f.assoc = {0.5, 0.5};
  RoutingInstance inst = uniform_instance(2, 1);
  int first = 0;
  const int trials = 100000;
  for (int s = 0; s < trials; ++s)
    if (randomized_round(f, inst, derive_trial_seed(4242, s)).assoc.column_of[0] == 0)
      ++first;
  CHECK(first > trials * 0.49);
  CHECK(first < trials * 0.51);
}

TEST_CASE("rounding rejects malformed fractional inputs") {
  RoutingInstance inst = uniform_instance(2, 1);
  FractionalSolution f;
  f.num_edges = 2;
  f.assoc = {-0.1, 1.1};
  CHECK_THROWS_AS(randomized_round(f, inst, 1), InvalidInputError);
  f.assoc = {0.0, 0.0};
  CHECK_THROWS_AS(randomized_round(f, inst, 1), InvalidInputError);
}

TEST_CASE("one-trial pipeline equals a single rounding with the derived seed") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    RoutingInstance inst = random_instance(rng);
    const std::uint64_t seed = rng();
    IncResult one = solve_inc(inst, seed, 1);
    RoutingSolution direct =
        randomized_round(solve_lp_p4(inst), inst, derive_trial_seed(seed, 0));
    CHECK(one.best.assoc.column_of == direct.assoc.column_of);
    CHECK(one.best.objective == direct.objective);
  }
}

TEST_CASE("the pipeline is deterministic and improves with more trials") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    RoutingInstance inst = random_instance(rng);
    const std::uint64_t seed = rng();
    IncResult a = solve_inc(inst, seed, 8);
    IncResult b = solve_inc(inst, seed, 8);
    CHECK(a.best.objective == b.best.objective);
    CHECK(a.best.assoc.column_of == b.best.assoc.column_of);
    CHECK(a.lower_bound() == b.lower_bound());

    IncResult more = solve_inc(inst, seed, 32);
    CHECK(more.best.objective <= a.best.objective);
    CHECK(a.lower_bound() <= a.best.objective * (1.0 + 1e-9) + 1e-9);
  }
  RoutingInstance inst = uniform_instance(1, 1);
  CHECK_THROWS_AS(solve_inc(inst, 1, 0), InvalidInputError);
}

TEST_CASE("exhaustive search splits two users over two edges") {
  RoutingSolution sol = solve_bruteforce(uniform_instance(2, 2));
  CHECK(sol.objective == doctest::Approx(3.712).epsilon(1e-12));
  CHECK(sol.assoc.column_of[0] != sol.assoc.column_of[1]);
}

TEST_CASE("exhaustive search breaks ties toward low column indices") {
  RoutingSolution sol = solve_bruteforce(uniform_instance(2, 1));
  CHECK(sol.assoc.column_of == std::vector<int>{0});
}

TEST_CASE("exhaustive search refuses oversized instances") {
  CHECK_THROWS_AS(solve_bruteforce(uniform_instance(2, 24)), SizeGuardError);
}

TEST_CASE("only-cloud baseline shares the hypothetical uplink") {
  RoutingInstance inst = uniform_instance(1, 4, true);
  RoutingSolution sol = assign_only_cloud(inst);
  CHECK(sol.objective == doctest::Approx(4 * 0.928).epsilon(1e-12));
  CHECK_FALSE(sol.uses_ina);

  RoutingInstance no_cloud = uniform_instance(1, 4, false);
  CHECK_THROWS_AS(assign_only_cloud(no_cloud), InfeasibleError);
}

TEST_CASE("nearest-edge baseline picks by distance with plain forwarding") {
  Topology t = uniform_topology(2, 3);
  t.edge_pos = {{0.0, 0.0}, {100.0, 0.0}};
  t.user_pos = {{10.0, 0.0}, {90.0, 0.0}, {50.0, 0.0}};  // last is equidistant
  RoutingInstance inst = make_instance(std::move(t), kResNet);
  RoutingSolution sol = assign_nearest_edge(inst);
  CHECK(sol.assoc.column_of == std::vector<int>{0, 1, 0});
  CHECK_FALSE(sol.uses_ina);
  // Edge 0 carries two users: fronthaul 3.712 plus plain backhaul 3.712.
  CHECK(sol.objective == doctest::Approx(7.424).epsilon(1e-12));
}

TEST_CASE("nearest-edge baseline needs coordinates") {
  RoutingInstance inst = uniform_instance(1, 1);
  CHECK_THROWS_AS(assign_nearest_edge(inst), InvalidInputError);
}

TEST_CASE("approximation-factor formula") {
  CHECK(theorem2_bound(std::exp(2.0), 1.0) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(theorem2_bound(1000.0, 170.0) ==
        doctest::Approx(2.0 * std::log(1000.0) / 170.0 + 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(theorem2_bound(1.0, 1.0), InvalidInputError);
  CHECK_THROWS_AS(theorem2_bound(10.0, 0.0), InvalidInputError);
}
