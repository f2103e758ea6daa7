#include "irisfeat/sweep.hpp"

#include <algorithm>
#include <optional>

#include "irisfeat/errors.hpp"
#include "irisfeat/parallel.hpp"
#include "irisfeat/rng.hpp"

namespace irisfeat {

std::uint64_t split_seed(std::uint64_t seed) { return derive_seed(seed, "split"); }
std::uint64_t pca_seed(std::uint64_t seed, int tap) { return derive_seed(seed, "pca", static_cast<std::uint64_t>(tap)); }
std::uint64_t svm_seed(std::uint64_t seed, int tap) { return derive_seed(seed, "svm", static_cast<std::uint64_t>(tap)); }
std::uint64_t subsplit_seed(std::uint64_t seed) { return derive_seed(seed, "subsplit"); }

LabeledInputs prepare_inputs(const Dataset& dataset, int threads) {
  LabeledInputs out;
  out.labels = labels_of(dataset.entries);
  out.inputs.resize(dataset.entries.size());
  parallel_for(dataset.entries.size(), threads, [&](std::size_t i) {
    out.inputs[i] = replicate_channels(rubber_sheet(dataset.images[i], dataset.entries[i].circles));
  });
  return out;
}

std::vector<FeatureMatrix> extract_features(const ModelSpec& model, const LabeledInputs& data,
                                            const std::set<int>& taps, TapMode mode, int threads) {
  if (data.inputs.size() != data.labels.size()) throw ShapeError("inputs and labels differ in length");
  std::vector<FeatureMatrix> out;
  if (data.inputs.empty() || taps.empty()) {
    for (int t : taps) {
      if (t < 1 || t > model.tap_count()) throw TapError("tap " + std::to_string(t) + " out of range");
    }
    return out;
  }
  const auto& first = data.inputs.front().shape();
  const auto shapes = tap_shapes(model, first.height, first.width);
  const auto names = model.tap_names();
  for (int t : taps) {
    if (t < 1 || t > model.tap_count()) throw TapError("tap " + std::to_string(t) + " out of range");
    FeatureMatrix m;
    m.n = static_cast<int>(data.inputs.size());
    m.d = static_cast<int>(shapes[t - 1].size());
    m.tap = t;
    m.layer_name = names[t - 1];
    m.labels = data.labels;
    m.data.resize(static_cast<std::size_t>(m.n) * m.d);
    out.push_back(std::move(m));
  }

  parallel_for(data.inputs.size(), threads, [&](std::size_t i) {
    if (data.inputs[i].shape() != first) throw ShapeError("all inputs must share one shape");
    auto result = forward_with_taps(model, data.inputs[i], taps, mode);
    std::size_t k = 0;
    for (int t : taps) {
      const auto flat = result.taps.at(t).values();
      std::copy(flat.begin(), flat.end(), out[k].row(static_cast<int>(i)).begin());
      ++k;
    }
  });
  return out;
}

TapOutcome evaluate_tap(const FeatureMatrix& features, const SplitPlan& plan, const SweepConfig& config) {
  features.validate();
  const auto train_raw = select_rows(features, plan.train_indices);
  const auto test_raw = select_rows(features, plan.test_indices);

  const auto scaler = minmax_fit(config.scaler_fit == ScalerFit::TrainOnly ? train_raw : features);
  const auto train_scaled = minmax_transform(scaler, train_raw);
  const auto test_scaled = minmax_transform(scaler, test_raw);

  PcaOptions pca_options = config.pca;
  pca_options.seed = pca_seed(config.seed, features.tap);
  const auto pca = pca_fit(train_scaled, pca_options);
  const auto train = pca_transform(pca, train_scaled);

  SvmOptions svm_options = config.svm;
  svm_options.seed = svm_seed(config.seed, features.tap);

  TapOutcome outcome;
  outcome.classifier = train_ovr(RowsView(train), train.labels, svm_options);
  outcome.test_features = pca_transform(pca, test_scaled);
  const auto predicted = predict(outcome.classifier, RowsView(outcome.test_features));

  outcome.result.tap = features.tap;
  outcome.result.layer_name = features.layer_name;
  outcome.result.feature_len = features.d;
  outcome.result.pca_dims = pca.retained;
  outcome.result.accuracy = accuracy(predicted, outcome.test_features.labels);
  return outcome;
}

namespace {

std::vector<TapOutcome> evaluate_all(const std::vector<FeatureMatrix>& per_tap, const SplitPlan& plan,
                                     const SweepConfig& config) {
  std::vector<TapOutcome> outcomes(per_tap.size());
  parallel_for(per_tap.size(), config.threads, [&](std::size_t k) {
    try {
      outcomes[k] = evaluate_tap(per_tap[k], plan, config);
    } catch (const Error& e) {
      rethrow_with_context(e, "tap " + std::to_string(per_tap[k].tap));
    }
  });
  return outcomes;
}

// Outcomes arrive in ascending tap order, so a strict comparison keeps the
// lowest tap on ties.
void absorb(EvalReport& report, std::vector<TapOutcome>& outcomes, std::optional<TapOutcome>& best) {
  for (auto& o : outcomes) {
    report.taps.push_back(o.result);
    if (!best || o.result.accuracy > best->result.accuracy) best = std::move(o);
  }
}

EvalReport start_report(const SplitPlan& plan, const SweepConfig& config) {
  EvalReport report;
  report.seed = config.seed;
  report.fmr_target = config.fmr_target;
  report.train_count = static_cast<int>(plan.train_indices.size());
  report.test_count = static_cast<int>(plan.test_indices.size());
  return report;
}

void finish(EvalReport& report, const std::optional<TapOutcome>& best, const SweepConfig& config) {
  if (!best) return;
  report.best_tap = best->result.tap;
  report.class_count = static_cast<int>(best->classifier.classes.size());
  const RowsView test(best->test_features);
  report.roc = roc_from_scores(best->classifier, test, best->test_features.labels);
  report.tpr_at_fmr = tpr_at_fmr(*report.roc, config.fmr_target);
  report.subsplit = subsplit_stats(best->classifier, test, best->test_features.labels, config.subsplits,
                                   config.subsplit_keep, subsplit_seed(config.seed));
}

}  // namespace

EvalReport evaluate_features(const std::vector<FeatureMatrix>& per_tap, const SplitPlan& plan,
                             const SweepConfig& config) {
  auto report = start_report(plan, config);
  auto outcomes = evaluate_all(per_tap, plan, config);
  std::optional<TapOutcome> best;
  absorb(report, outcomes, best);
  finish(report, best, config);
  return report;
}

EvalReport layer_sweep(const ModelSpec& model, const LabeledInputs& data, const SplitPlan& plan,
                       const std::set<int>& taps, const SweepConfig& config) {
  if (config.tap_batch < 0) throw ParameterError("tap_batch must be >= 0");
  auto report = start_report(plan, config);
  report.preset = model.preset;
  report.label = model.preset;
  const std::vector<int> ordered(taps.begin(), taps.end());
  const std::size_t batch = config.tap_batch == 0 ? std::max<std::size_t>(ordered.size(), 1)
                                                  : static_cast<std::size_t>(config.tap_batch);
  std::optional<TapOutcome> best;
  for (std::size_t start = 0; start < ordered.size(); start += batch) {
    const std::size_t end = std::min(ordered.size(), start + batch);
    const std::set<int> chunk(ordered.begin() + static_cast<std::ptrdiff_t>(start),
                              ordered.begin() + static_cast<std::ptrdiff_t>(end));
    const auto features = extract_features(model, data, chunk, config.tap_mode, config.threads);
    auto outcomes = evaluate_all(features, plan, config);
    absorb(report, outcomes, best);
  }
  finish(report, best, config);
  return report;
}

}  // namespace irisfeat
