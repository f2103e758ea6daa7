#include "irisfeat/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "irisfeat/errors.hpp"
#include "irisfeat/rng.hpp"

namespace irisfeat {

SplitPlan stratified_split(std::span<const std::uint32_t> labels, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ParameterError("split fraction must be in (0, 1)");
  std::map<std::uint32_t, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  SplitPlan plan;
  plan.fraction = fraction;
  plan.seed = seed;
  for (auto& [cls, rows] : by_class) {
    const auto s = static_cast<long>(rows.size());
    if (s < 2) {
      throw StratificationError("class " + std::to_string(cls) + " has " + std::to_string(s) +
                                " sample(s); both sides of the split need one");
    }
    const long train = std::clamp(std::lround(static_cast<double>(s) * fraction), 1L, s - 1);
    Rng rng(derive_seed(seed, "split.class", cls));
    shuffle(std::span<std::size_t>(rows), rng);
    plan.train_indices.insert(plan.train_indices.end(), rows.begin(), rows.begin() + train);
    plan.test_indices.insert(plan.test_indices.end(), rows.begin() + train, rows.end());
  }
  std::sort(plan.train_indices.begin(), plan.train_indices.end());
  std::sort(plan.test_indices.begin(), plan.test_indices.end());
  return plan;
}

double accuracy(std::span<const std::uint32_t> predictions, std::span<const std::uint32_t> truth) {
  if (predictions.empty()) throw ParameterError("accuracy of an empty prediction list");
  if (predictions.size() != truth.size()) throw ParameterError("prediction and truth lengths differ");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predictions[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

FiveNumberSummary five_number_summary(std::vector<double> values) {
  if (values.empty()) throw ParameterError("five-number summary of nothing");
  std::sort(values.begin(), values.end());
  const auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {values.front(), quantile(0.25), quantile(0.5), quantile(0.75), values.back()};
}

SubsplitResult subsplit_stats(const OvRModel& model, RowsView x_test, std::span<const std::uint32_t> truth,
                              int n_splits, double keep, std::uint64_t seed) {
  if (n_splits < 1) throw ParameterError("need at least one sub-split");
  const auto predictions = predict(model, x_test);
  SubsplitResult result;
  for (int s = 0; s < n_splits; ++s) {
    const auto plan = stratified_split(truth, keep, derive_seed(seed, "subsplit", static_cast<std::uint64_t>(s)));
    std::vector<std::uint32_t> kept_pred, kept_truth;
    for (auto i : plan.train_indices) {
      kept_pred.push_back(predictions[i]);
      kept_truth.push_back(truth[i]);
    }
    result.accuracies.push_back(accuracy(kept_pred, kept_truth));
  }
  result.summary = five_number_summary(result.accuracies);
  return result;
}

}  // namespace irisfeat
