#include "incfl/messages.hpp"

#include <string>

#include "incfl/errors.hpp"
#include "incfl/numeric.hpp"

namespace incfl {

LocalMessage make_local_message(std::uint64_t dataset_count, ModelParams w) {
  if (dataset_count == 0)
    throw InvalidInputError("make_local_message: count must be positive");
  return LocalMessage{dataset_count, std::move(w)};
}

namespace {

// Shared weighted-mean kernel for both aggregation levels: a single division
// after a compensated sum, matching global_aggregate_star.
template <class Message>
std::pair<std::uint64_t, ModelParams> weighted_mean(std::span<const Message> msgs,
                                                    const char* who) {
  if (msgs.empty()) throw InvalidInputError(std::string(who) + ": empty input");
  const std::size_t d = msgs.front().params.size();
  std::uint64_t total = 0;
  for (const Message& m : msgs) {
    if (m.count == 0) throw InvalidInputError(std::string(who) + ": zero count");
    if (m.params.size() != d)
      throw InvalidInputError(std::string(who) + ": dimension mismatch");
    total += m.count;
  }
  // Anchored weighted mean, same kernel as global_aggregate_star.
  const ModelParams& anchor = msgs.front().params;
  ModelParams mean(d);
  for (std::size_t i = 0; i < d; ++i) {
    KahanSum s;
    for (const Message& m : msgs)
      s.add(static_cast<double>(m.count) * (m.params[i] - anchor[i]));
    mean[i] = anchor[i] + s.value() / static_cast<double>(total);
  }
  return {total, std::move(mean)};
}

}  // namespace

EdgeMessage edge_aggregate(std::span<const LocalMessage> members) {
  auto [total, mean] = weighted_mean(members, "edge_aggregate");
  return EdgeMessage{total, std::move(mean)};
}

ModelParams cloud_aggregate(std::span<const EdgeMessage> edges) {
  auto [total, mean] = weighted_mean(edges, "cloud_aggregate");
  (void)total;
  return mean;
}

}  // namespace incfl
