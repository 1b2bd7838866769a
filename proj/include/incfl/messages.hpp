#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "incfl/fl_core.hpp"

namespace incfl {

// Message a user uploads: its sample count and its locally trained model.
struct LocalMessage {
  std::uint64_t count = 0;
  ModelParams params;
};

// Message an edge node forwards to the cloud: the summed sample count of its
// associated users and their weighted-average model.
struct EdgeMessage {
  std::uint64_t count = 0;
  ModelParams params;
};

// Packages a user's model for upload. count must be >= 1.
LocalMessage make_local_message(std::uint64_t dataset_count, ModelParams w);

// Weighted average of member messages at one edge node. An edge with no
// associated users sends nothing, so an empty member list is an error.
EdgeMessage edge_aggregate(std::span<const LocalMessage> members);

// Final combine at the cloud over the (nonempty) edge messages. Equals the
// star-topology aggregate of the underlying local models.
ModelParams cloud_aggregate(std::span<const EdgeMessage> edges);

}  // namespace incfl
