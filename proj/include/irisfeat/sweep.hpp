#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "irisfeat/eval.hpp"
#include "irisfeat/features.hpp"
#include "irisfeat/manifest.hpp"
#include "irisfeat/model.hpp"
#include "irisfeat/pca.hpp"
#include "irisfeat/svm.hpp"

namespace irisfeat {

// Network inputs with their class labels.
struct LabeledInputs {
  std::vector<Tensor> inputs;
  std::vector<std::uint32_t> labels;
};

/// Rubber-sheet normalizes every image and replicates it to 3 channels.
LabeledInputs prepare_inputs(const Dataset& dataset, int threads = 1);

/// One FeatureMatrix per requested tap (ascending), rows in input order.
std::vector<FeatureMatrix> extract_features(const ModelSpec& model, const LabeledInputs& data,
                                            const std::set<int>& taps, TapMode mode = TapMode::PreActivation,
                                            int threads = 1);

enum class ScalerFit { TrainOnly, AllRows };

struct SweepConfig {
  std::uint64_t seed = 42;
  ScalerFit scaler_fit = ScalerFit::TrainOnly;
  PcaOptions pca;  // seed is overridden per tap
  SvmOptions svm;  // seed is overridden per tap
  int subsplits = 10;
  double subsplit_keep = 0.8;
  double fmr_target = 0.001;
  TapMode tap_mode = TapMode::PreActivation;
  int threads = 1;
  // Taps extracted per forward pass in layer_sweep; 0 means all at once.
  // Smaller batches bound memory at the cost of repeated forward passes.
  int tap_batch = 0;
};

// Seeds used by the pipeline, all derived from SweepConfig::seed.
std::uint64_t split_seed(std::uint64_t seed);
std::uint64_t pca_seed(std::uint64_t seed, int tap);
std::uint64_t svm_seed(std::uint64_t seed, int tap);
std::uint64_t subsplit_seed(std::uint64_t seed);

struct TapResult {
  int tap = 0;
  std::string layer_name;
  int feature_len = 0;
  int pca_dims = 0;
  double accuracy = 0.0;

  bool operator==(const TapResult&) const = default;
};

struct EvalReport {
  std::string label;  // configuration name
  std::string preset;
  std::uint64_t seed = 0;
  int train_count = 0;
  int test_count = 0;
  int class_count = 0;
  std::vector<TapResult> taps;  // ascending tap order
  int best_tap = 0;             // 0 when no taps were evaluated
  std::optional<RocCurve> roc;  // best tap only
  double fmr_target = 0.001;
  double tpr_at_fmr = 0.0;
  std::optional<SubsplitResult> subsplit;

  bool operator==(const EvalReport&) const = default;
};

// Everything produced for a single tap; kept so the best one can be scored further.
struct TapOutcome {
  TapResult result;
  OvRModel classifier;
  FeatureMatrix test_features;  // scaled and projected
};

/// scale -> PCA -> one-vs-rest SVM -> test accuracy for one tap's features.
TapOutcome evaluate_tap(const FeatureMatrix& features, const SplitPlan& plan, const SweepConfig& config);

/// Runs evaluate_tap over every tap, picks the most accurate (lowest index on
/// ties), then computes its ROC, TPR@FMR and sub-split statistics. Stage errors
/// are rethrown with the tap index in the message.
EvalReport evaluate_features(const std::vector<FeatureMatrix>& per_tap, const SplitPlan& plan,
                             const SweepConfig& config);

/// extract_features followed by evaluate_features, tap_batch taps at a time.
EvalReport layer_sweep(const ModelSpec& model, const LabeledInputs& data, const SplitPlan& plan,
                       const std::set<int>& taps, const SweepConfig& config);

}  // namespace irisfeat
