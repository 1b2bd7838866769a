#include "incfl/fl_core.hpp"

#include <cmath>
#include <string>

#include "incfl/errors.hpp"
#include "incfl/numeric.hpp"

namespace incfl {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  KahanSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
  return s.value();
}

double sample_loss(LossKind kind, double z, double y) {
  switch (kind) {
    case LossKind::SquaredError: {
      double r = z - y;
      return 0.5 * r * r;
    }
    case LossKind::Logistic: {
      // log(1 + exp(-y z)) without overflow for large |z|.
      double t = y * z;
      return t > 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
    }
  }
  return 0.0;
}

// d/dz of the per-sample loss.
double sample_loss_grad(LossKind kind, double z, double y) {
  switch (kind) {
    case LossKind::SquaredError:
      return z - y;
    case LossKind::Logistic: {
      double t = y * z;
      return -y / (1.0 + std::exp(t));
    }
  }
  return 0.0;
}

void check_dimension(const LocalDataset& ds, std::size_t d) {
  for (const Sample& s : ds.samples) {
    if (s.x.size() != d)
      throw InvalidInputError("sample dimension " + std::to_string(s.x.size()) +
                              " does not match model dimension " + std::to_string(d));
  }
}

}  // namespace

double global_loss(const ModelParams& w, const std::vector<LocalDataset>& datasets,
                   const LossSpec& spec) {
  std::size_t n = 0;
  for (const LocalDataset& ds : datasets) {
    check_dimension(ds, w.size());
    n += ds.count();
  }
  if (n == 0) throw InvalidInputError("global_loss: no samples");

  KahanSum acc;
  for (const LocalDataset& ds : datasets)
    for (const Sample& s : ds.samples) acc.add(sample_loss(spec.loss, dot(s.x, w), s.y));

  double reg = 0.0;
  if (spec.l2_weight != 0.0) {
    KahanSum sq;
    for (double v : w) sq.add(v * v);
    reg = spec.l2_weight * 0.5 * sq.value();
  }
  return acc.value() / static_cast<double>(n) + reg;
}

ModelParams local_sgd_update(const ModelParams& psi, const LocalDataset& dataset,
                             const LossSpec& spec, std::size_t sample_index) {
  if (sample_index >= dataset.count())
    throw InvalidInputError("local_sgd_update: sample index " +
                            std::to_string(sample_index) + " out of range");
  const Sample& s = dataset.samples[sample_index];
  if (s.x.size() != psi.size())
    throw InvalidInputError("local_sgd_update: sample/model dimension mismatch");

  double g = sample_loss_grad(spec.loss, dot(s.x, psi), s.y);
  ModelParams out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    double grad_i = g * s.x[i] + spec.l2_weight * psi[i];
    out[i] = psi[i] - spec.learning_rate * grad_i;
  }
  return out;
}

ModelParams global_aggregate_star(
    const std::vector<std::pair<std::uint64_t, ModelParams>>& locals) {
  if (locals.empty()) throw InvalidInputError("global_aggregate_star: empty input");
  const std::size_t d = locals.front().second.size();
  std::uint64_t n = 0;
  for (const auto& [nk, wk] : locals) {
    if (nk == 0) throw InvalidInputError("global_aggregate_star: zero sample count");
    if (wk.size() != d)
      throw InvalidInputError("global_aggregate_star: dimension mismatch");
    n += nk;
  }

  // Weighted mean anchored at the first model: w0 + sum n_k (w_k - w0) / n.
  // A convex combination of identical models is then exactly that model.
  const ModelParams& anchor = locals.front().second;
  ModelParams result(d);
  for (std::size_t i = 0; i < d; ++i) {
    KahanSum s;
    for (const auto& [nk, wk] : locals)
      s.add(static_cast<double>(nk) * (wk[i] - anchor[i]));
    result[i] = anchor[i] + s.value() / static_cast<double>(n);
  }
  return result;
}

}  // namespace incfl
