#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace incfl {

// Model size in bits. Configured in megabytes (1 MB = 1e6 bytes).
struct ModelSize {
  double bits = 0.0;

  static ModelSize from_megabytes(double mb) { return ModelSize{mb * 8.0e6}; }
  double bytes() const { return bits / 8.0; }
};

// Edge-network description: per-edge fronthaul/backhaul capacities, the
// cloud's downlink and (hypothetical) direct uplink, user reachability and
// planar coordinates. When allow_direct_cloud is set, users may associate
// with the cloud directly; that option behaves like one extra column with
// fronthaul capacity cloud_uplink_bps and no backhaul leg.
struct Topology {
  std::vector<double> fronthaul_bps;  // per edge, B_fr
  std::vector<double> backhaul_bps;   // per edge, B_bk
  double downlink_bps = 0.0;          // W_d
  double cloud_uplink_bps = 0.0;      // W_u
  bool allow_direct_cloud = false;

  std::vector<std::array<double, 2>> edge_pos;  // meters; may be empty
  std::vector<std::array<double, 2>> user_pos;  // meters; may be empty
  std::vector<std::vector<bool>> reachable;     // [user][edge]

  int num_edges() const { return static_cast<int>(fronthaul_bps.size()); }
  int num_users() const { return static_cast<int>(reachable.size()); }
  // Association columns: edges, plus the direct-cloud column when enabled.
  int num_columns() const { return num_edges() + (allow_direct_cloud ? 1 : 0); }
};

// Binary user-to-column association. Each row (user) sits on exactly one
// column. Edge columns are 0..num_edges-1; when has_cloud_column is set,
// column num_edges is the direct-cloud column.
struct Association {
  int num_edges = 0;
  bool has_cloud_column = false;
  std::vector<int> column_of;  // per row

  int num_columns() const { return num_edges + (has_cloud_column ? 1 : 0); }
  int cloud_column() const { return has_cloud_column ? num_edges : -1; }
  int rows() const { return static_cast<int>(column_of.size()); }

  std::vector<int> column_counts() const {
    std::vector<int> c(num_columns(), 0);
    for (int col : column_of) ++c[col];
    return c;
  }
};

// Uplink rates in bits/s, one entry per (row, column); nonzero only where
// the association places the user.
struct RateAllocation {
  int rows = 0;
  int cols = 0;
  std::vector<double> bps;  // row-major, rows * cols

  double at(int r, int c) const { return bps[static_cast<std::size_t>(r) * cols + c]; }
  double& at(int r, int c) { return bps[static_cast<std::size_t>(r) * cols + c]; }
};

struct LatencyReport {
  std::vector<double> fronthaul_s;      // per column
  std::vector<double> edge_to_cloud_s;  // per column; 0 for the cloud column
  std::vector<double> uplink_s;         // per column, fronthaul + edge-to-cloud
  double total_s = 0.0;                 // max over columns
  double cloud_rx_bytes = 0.0;
  std::uint64_t cloud_aggregation_inputs = 0;
};

// T_d = D / W_d.
double broadcast_latency(ModelSize size, const Topology& topo);

// Slowest associated user of a column: max_k D / r_k; 0 if the column is
// empty. Throws if a user is associated with a zero rate.
double fronthaul_latency(int column, const Association& assoc,
                         const RateAllocation& rates, ModelSize size);

// Edge-to-cloud time when the edge merely forwards models: D * |K_m| / B_bk.
double backhaul_latency_plain(int edge, const Association& assoc, ModelSize size,
                              const Topology& topo);

// Edge-to-cloud time with in-network aggregation: the edge uploads a single
// model, so min{D/B_bk, D |K_m| / B_bk}; 0 for an empty edge.
double backhaul_latency_ina(int edge, const Association& assoc, ModelSize size,
                            const Topology& topo);

// Full uplink picture for one aggregation round, plus cloud-side traffic and
// computation counters.
LatencyReport total_latency(const Association& assoc, const RateAllocation& rates,
                            ModelSize size, const Topology& topo, bool ina_enabled);

struct CloudOverhead {
  double rx_bytes = 0.0;
  std::uint64_t aggregation_inputs = 0;
};

// Traffic and number of models the cloud must combine. Without INA every
// user's model reaches the cloud; with INA only one message per nonempty
// column does (the direct-cloud group counts as one aggregated input).
CloudOverhead cloud_overhead(const Association& assoc, ModelSize size,
                             bool ina_enabled);

}  // namespace incfl
