#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace incfl {

// Dense parameter vector of a model. Also used for the global model.
using ModelParams = std::vector<double>;

// One sample: feature vector x and scalar target y.
struct Sample {
  std::vector<double> x;
  double y = 0.0;
};

// A user's private training set. The sample count is what gets carried in
// aggregation messages.
struct LocalDataset {
  std::vector<Sample> samples;

  std::size_t count() const { return samples.size(); }
};

enum class LossKind {
  SquaredError,  // l(z) = 0.5 * (z - y)^2
  Logistic,      // l(z) = log(1 + exp(-y z)), y in {-1, +1}
};

// Loss configuration shared by all users: per-sample loss, L2 regularizer
// weight and SGD step size.
struct LossSpec {
  LossKind loss = LossKind::SquaredError;
  double l2_weight = 0.0;     // xi
  double learning_rate = 0.01;  // eta
};

// Global objective: (1/n) sum_i l_i(x_i' w) + xi * 0.5 * |w|^2 over the
// union of all datasets.
double global_loss(const ModelParams& w, const std::vector<LocalDataset>& datasets,
                   const LossSpec& spec);

// One stochastic gradient step from the broadcast global model, using the
// single indexed sample of the user's dataset.
ModelParams local_sgd_update(const ModelParams& psi, const LocalDataset& dataset,
                             const LossSpec& spec, std::size_t sample_index);

// Sample-count-weighted mean of local models over a star topology. This is
// the ground truth the in-network aggregation path must reproduce.
ModelParams global_aggregate_star(
    const std::vector<std::pair<std::uint64_t, ModelParams>>& locals);

}  // namespace incfl
