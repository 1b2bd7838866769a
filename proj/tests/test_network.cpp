#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "incfl/errors.hpp"
#include "incfl/network.hpp"
#include "incfl/rng.hpp"

using namespace incfl;

namespace {

// A topology with `edges` identical edges, `users` users that can reach every
// edge, and an optional direct-cloud column.
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

Association all_on_column(const Topology& t, int users, int column) {
  Association a;
  a.num_edges = t.num_edges();
  a.has_cloud_column = t.allow_direct_cloud;
  a.column_of.assign(users, column);
  return a;
}

// Fair-share rates for a given association, written out longhand so this file
// does not depend on the routing module.
RateAllocation fair_rates(const Association& a, const Topology& t) {
  RateAllocation r;
  r.rows = a.rows();
  r.cols = a.num_columns();
  r.bps.assign(static_cast<std::size_t>(r.rows) * r.cols, 0.0);
  std::vector<int> counts = a.column_counts();
  for (int u = 0; u < r.rows; ++u) {
    int c = a.column_of[u];
    double cap = (a.has_cloud_column && c == a.cloud_column()) ? t.cloud_uplink_bps
                                                               : t.fronthaul_bps[c];
    r.at(u, c) = cap / counts[c];
  }
  return r;
}

const ModelSize kResNet = ModelSize::from_megabytes(232.0);

}  // namespace

TEST_CASE("model size conversion") {
  CHECK(kResNet.bits == doctest::Approx(1.856e9).epsilon(1e-15));
  CHECK(kResNet.bytes() == doctest::Approx(232.0e6).epsilon(1e-15));
}

TEST_CASE("broadcast latency is model size over downlink") {
  Topology t = uniform_topology(1, 1);
  CHECK(broadcast_latency(kResNet, t) == doctest::Approx(0.928).epsilon(1e-12));
}

TEST_CASE("fronthaul latency follows the slowest associated user") {
  Topology t = uniform_topology(1, 2);
  Association a = all_on_column(t, 2, 0);
  RateAllocation r = fair_rates(a, t);
  // Two users share 1 Gb/s, so each uploads at 0.5 Gb/s.
  CHECK(fronthaul_latency(0, a, r, kResNet) == doctest::Approx(3.712).epsilon(1e-12));

  // Uneven rates: the slower user dominates.
  r.at(0, 0) = 1.0e9;
  r.at(1, 0) = 0.25e9;
  CHECK(fronthaul_latency(0, a, r, kResNet) == doctest::Approx(7.424).epsilon(1e-12));
}

TEST_CASE("fronthaul latency of an empty column is zero") {
  Topology t = uniform_topology(2, 1);
  Association a = all_on_column(t, 1, 0);
  RateAllocation r = fair_rates(a, t);
  CHECK(fronthaul_latency(1, a, r, kResNet) == 0.0);
}

TEST_CASE("a user associated with zero rate is rejected") {
  Topology t = uniform_topology(1, 1);
  Association a = all_on_column(t, 1, 0);
  RateAllocation r = fair_rates(a, t);
  r.at(0, 0) = 0.0;
  CHECK_THROWS_AS(fronthaul_latency(0, a, r, kResNet), InvalidInputError);
}

TEST_CASE("plain backhaul scales with occupancy, aggregated backhaul does not") {
  Topology t = uniform_topology(1, 10);
  Association a = all_on_column(t, 10, 0);
  CHECK(backhaul_latency_plain(0, a, kResNet, t) == doctest::Approx(18.56).epsilon(1e-12));
  CHECK(backhaul_latency_ina(0, a, kResNet, t) == doctest::Approx(1.856).epsilon(1e-12));
}

TEST_CASE("backhaul of an empty edge is zero either way") {
  Topology t = uniform_topology(2, 1);
  Association a = all_on_column(t, 1, 0);
  CHECK(backhaul_latency_plain(1, a, kResNet, t) == 0.0);
  CHECK(backhaul_latency_ina(1, a, kResNet, t) == 0.0);
}

TEST_CASE("aggregated backhaul never exceeds the plain one") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    int edges = 1 + static_cast<int>(rng() % 4);
    int users = 1 + static_cast<int>(rng() % 30);
    Topology t = uniform_topology(edges, users);
    for (double& b : t.backhaul_bps) b = (0.1 + uniform01(rng)) * 1e9;
    Association a;
    a.num_edges = edges;
    a.column_of.resize(users);
    for (int& c : a.column_of) c = static_cast<int>(rng() % edges);
    for (int m = 0; m < edges; ++m) {
      CHECK(backhaul_latency_ina(m, a, kResNet, t) <=
            backhaul_latency_plain(m, a, kResNet, t) + 1e-12);
    }
  }
}

TEST_CASE("single user chain: fronthaul plus backhaul") {
  Topology t = uniform_topology(1, 1);
  Association a = all_on_column(t, 1, 0);
  LatencyReport rep = total_latency(a, fair_rates(a, t), kResNet, t, true);
  CHECK(rep.fronthaul_s[0] == doctest::Approx(1.856).epsilon(1e-12));
  CHECK(rep.edge_to_cloud_s[0] == doctest::Approx(1.856).epsilon(1e-12));
  CHECK(rep.total_s == doctest::Approx(3.712).epsilon(1e-12));
}

TEST_CASE("only-cloud association: 1000 users share the hypothetical uplink") {
  Topology t = uniform_topology(1, 1000, true);
  Association a = all_on_column(t, 1000, 1);  // cloud column
  LatencyReport rep = total_latency(a, fair_rates(a, t), kResNet, t, false);
  CHECK(rep.total_s == doctest::Approx(928.0).epsilon(1e-12));
  // Direct uploads have no edge-to-cloud leg.
  CHECK(rep.edge_to_cloud_s[a.cloud_column()] == 0.0);
}

TEST_CASE("total latency is the slowest column") {
  Topology t = uniform_topology(2, 3);
  t.backhaul_bps[1] = 0.5e9;
  Association a = all_on_column(t, 3, 0);
  a.column_of[2] = 1;
  LatencyReport rep = total_latency(a, fair_rates(a, t), kResNet, t, true);
  // Edge 0: two users at 0.5 Gb/s each -> 3.712 + 1.856 = 5.568.
  // Edge 1: one user at 1 Gb/s -> 1.856 + 3.712 = 5.568.
  CHECK(rep.uplink_s[0] == doctest::Approx(5.568).epsilon(1e-12));
  CHECK(rep.uplink_s[1] == doctest::Approx(5.568).epsilon(1e-12));
  CHECK(rep.total_s == doctest::Approx(5.568).epsilon(1e-12));
}

TEST_CASE("latency is linear in model size and antitone in capacity") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    int edges = 1 + static_cast<int>(rng() % 3);
    int users = 1 + static_cast<int>(rng() % 20);
    Topology t = uniform_topology(edges, users);
    for (double& b : t.fronthaul_bps) b = (0.2 + uniform01(rng)) * 1e9;
    for (double& b : t.backhaul_bps) b = (0.2 + uniform01(rng)) * 1e9;
    Association a;
    a.num_edges = edges;
    a.column_of.resize(users);
    for (int& c : a.column_of) c = static_cast<int>(rng() % edges);

    double base =
        total_latency(a, fair_rates(a, t), ModelSize::from_megabytes(100.0), t, true)
            .total_s;
    double doubled =
        total_latency(a, fair_rates(a, t), ModelSize::from_megabytes(200.0), t, true)
            .total_s;
    CHECK(doubled == doctest::Approx(2.0 * base).epsilon(1e-12));

    Topology faster = t;
    for (double& b : faster.fronthaul_bps) b *= 2.0;
    for (double& b : faster.backhaul_bps) b *= 2.0;
    double quick = total_latency(a, fair_rates(a, faster),
                                 ModelSize::from_megabytes(100.0), faster, true)
                       .total_s;
    CHECK(quick <= base + 1e-12);
  }
}

TEST_CASE("cloud overhead without aggregation counts every user") {
  Topology t = uniform_topology(3, 0);
  Association a;
  a.num_edges = 3;
  a.column_of = {0, 0, 1, 2, 2, 2};
  CloudOverhead oh = cloud_overhead(a, kResNet, false);
  CHECK(oh.aggregation_inputs == 6);
  CHECK(oh.rx_bytes == doctest::Approx(6 * 232.0e6).epsilon(1e-15));
}

TEST_CASE("cloud overhead with aggregation counts nonempty columns") {
  Association a;
  a.num_edges = 3;
  a.has_cloud_column = true;
  a.column_of = {0, 0, 2, 3, 3};  // edge 1 unused; two users direct to cloud
  CloudOverhead oh = cloud_overhead(a, kResNet, true);
  CHECK(oh.aggregation_inputs == 3);
  CHECK(oh.rx_bytes == doctest::Approx(3 * 232.0e6).epsilon(1e-15));
}

TEST_CASE("overhead agrees with the latency report counters") {
  Topology t = uniform_topology(2, 5, true);
  Association a;
  a.num_edges = 2;
  a.has_cloud_column = true;
  a.column_of = {0, 1, 1, 2, 0};
  for (bool ina : {false, true}) {
    LatencyReport rep = total_latency(a, fair_rates(a, t), kResNet, t, ina);
    CloudOverhead oh = cloud_overhead(a, kResNet, ina);
    CHECK(rep.cloud_rx_bytes == oh.rx_bytes);
    CHECK(rep.cloud_aggregation_inputs == oh.aggregation_inputs);
  }
}
