#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "irisfeat/svm.hpp"

namespace irisfeat {

struct SplitPlan {
  std::vector<std::size_t> train_indices;  // ascending
  std::vector<std::size_t> test_indices;   // ascending
  double fraction = 0.7;
  std::uint64_t seed = 0;

  bool operator==(const SplitPlan&) const = default;
};

/// Per class of size s: clamp(round(s * fraction), 1, s - 1) rows go to train,
/// chosen by a shuffle seeded with derive_seed(seed, "split.class", class_id).
/// Throws StratificationError when a class has fewer than 2 samples.
SplitPlan stratified_split(std::span<const std::uint32_t> labels, double fraction, std::uint64_t seed);

/// Fraction of equal entries. ParameterError on empty or unequal lengths.
double accuracy(std::span<const std::uint32_t> predictions, std::span<const std::uint32_t> truth);

struct RocPoint {
  double threshold = 0.0;  // accept when score >= threshold; the first point uses +infinity
  double fmr = 0.0;
  double tpr = 0.0;

  bool operator==(const RocPoint&) const = default;
};

struct RocCurve {
  // Starts at (0, 0) for threshold +infinity, then one point per distinct score
  // in descending order, ending at (1, 1).
  std::vector<RocPoint> points;
  std::size_t genuine_count = 0;
  std::size_t impostor_count = 0;

  bool operator==(const RocCurve&) const = default;
};

/// Exact threshold sweep. DegenerateScoresError when either list is empty.
RocCurve roc_from_genuine_impostor(std::span<const double> genuine, std::span<const double> impostor);

/// Genuine score: a row's score for its true class. Impostor scores: the row's
/// scores for every other class.
RocCurve roc_from_scores(const OvRModel& model, RowsView x, std::span<const std::uint32_t> truth);

/// Highest TPR over sweep points with FMR <= target, i.e. the TPR at the most
/// permissive threshold that still meets the FMR bound. No interpolation.
double tpr_at_fmr(const RocCurve& curve, double fmr_target);

struct FiveNumberSummary {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  bool operator==(const FiveNumberSummary&) const = default;
};

/// Quartiles by linear interpolation between order statistics at p * (n - 1).
FiveNumberSummary five_number_summary(std::vector<double> values);

struct SubsplitResult {
  std::vector<double> accuracies;
  FiveNumberSummary summary;
  bool operator==(const SubsplitResult&) const = default;
};

/// For each of n_splits stratified splits of the test rows (keep fraction kept,
/// seed derive_seed(seed, "subsplit", s)), accuracy of the trained model on the kept part.
SubsplitResult subsplit_stats(const OvRModel& model, RowsView x_test, std::span<const std::uint32_t> truth,
                              int n_splits = 10, double keep = 0.8, std::uint64_t seed = 0);

}  // namespace irisfeat
