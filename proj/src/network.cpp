#include "incfl/network.hpp"

#include <algorithm>
#include <string>

#include "incfl/errors.hpp"

namespace incfl {

namespace {

void check_column(int column, const Association& assoc) {
  if (column < 0 || column >= assoc.num_columns())
    throw InvalidInputError("column index " + std::to_string(column) + " out of range");
}

void check_edge(int edge, const Association& assoc, const Topology& topo) {
  if (edge < 0 || edge >= assoc.num_edges || edge >= topo.num_edges())
    throw InvalidInputError("edge index " + std::to_string(edge) + " out of range");
}

}  // namespace

double broadcast_latency(ModelSize size, const Topology& topo) {
  if (topo.downlink_bps <= 0.0)
    throw InvalidInputError("broadcast_latency: nonpositive downlink capacity");
  return size.bits / topo.downlink_bps;
}

double fronthaul_latency(int column, const Association& assoc,
                         const RateAllocation& rates, ModelSize size) {
  check_column(column, assoc);
  double worst = 0.0;
  for (int r = 0; r < assoc.rows(); ++r) {
    if (assoc.column_of[r] != column) continue;
    double rate = rates.at(r, column);
    if (rate <= 0.0)
      throw InvalidInputError("fronthaul_latency: user " + std::to_string(r) +
                              " associated with zero rate");
    worst = std::max(worst, size.bits / rate);
  }
  return worst;
}

double backhaul_latency_plain(int edge, const Association& assoc, ModelSize size,
                              const Topology& topo) {
  check_edge(edge, assoc, topo);
  int count = 0;
  for (int col : assoc.column_of)
    if (col == edge) ++count;
  return size.bits * static_cast<double>(count) / topo.backhaul_bps[edge];
}

double backhaul_latency_ina(int edge, const Association& assoc, ModelSize size,
                            const Topology& topo) {
  check_edge(edge, assoc, topo);
  int count = 0;
  for (int col : assoc.column_of)
    if (col == edge) ++count;
  if (count == 0) return 0.0;
  return std::min(size.bits / topo.backhaul_bps[edge],
                  size.bits * static_cast<double>(count) / topo.backhaul_bps[edge]);
}

LatencyReport total_latency(const Association& assoc, const RateAllocation& rates,
                            ModelSize size, const Topology& topo, bool ina_enabled) {
  if (assoc.num_edges != topo.num_edges())
    throw InvalidInputError("total_latency: association/topology edge count mismatch");
  if (assoc.has_cloud_column && !topo.allow_direct_cloud)
    throw InvalidInputError("total_latency: direct-cloud column not enabled in topology");
  if (rates.rows != assoc.rows() || rates.cols != assoc.num_columns())
    throw InvalidInputError("total_latency: rate matrix shape mismatch");

  const int cols = assoc.num_columns();
  LatencyReport rep;
  rep.fronthaul_s.assign(cols, 0.0);
  rep.edge_to_cloud_s.assign(cols, 0.0);
  rep.uplink_s.assign(cols, 0.0);

  for (int c = 0; c < cols; ++c) {
    rep.fronthaul_s[c] = fronthaul_latency(c, assoc, rates, size);
    if (c < assoc.num_edges) {
      rep.edge_to_cloud_s[c] = ina_enabled
                                   ? backhaul_latency_ina(c, assoc, size, topo)
                                   : backhaul_latency_plain(c, assoc, size, topo);
    }
    // The direct-cloud column has no backhaul leg.
    rep.uplink_s[c] = rep.fronthaul_s[c] + rep.edge_to_cloud_s[c];
    rep.total_s = std::max(rep.total_s, rep.uplink_s[c]);
  }

  CloudOverhead oh = cloud_overhead(assoc, size, ina_enabled);
  rep.cloud_rx_bytes = oh.rx_bytes;
  rep.cloud_aggregation_inputs = oh.aggregation_inputs;
  return rep;
}

CloudOverhead cloud_overhead(const Association& assoc, ModelSize size,
                             bool ina_enabled) {
  CloudOverhead oh;
  if (!ina_enabled) {
    // Star behavior: one model per user reaches the cloud.
    auto users = static_cast<std::uint64_t>(assoc.rows());
    oh.aggregation_inputs = users;
    oh.rx_bytes = static_cast<double>(users) * size.bytes();
    return oh;
  }
  std::uint64_t nonempty = 0;
  for (int count : assoc.column_counts())
    if (count > 0) ++nonempty;
  oh.aggregation_inputs = nonempty;
  oh.rx_bytes = static_cast<double>(nonempty) * size.bytes();
  return oh;
}

}  // namespace incfl
