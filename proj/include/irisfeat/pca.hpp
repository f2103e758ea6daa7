#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "irisfeat/container.hpp"
#include "irisfeat/features.hpp"

namespace irisfeat {

// Denominator for explained-variance ratios.
enum class VarianceBasis {
  Total,     // sum of all column variances of the centered training data
  Captured,  // sum of the variances of the computed components
};

struct PcaOptions {
  int cap = 2000;
  double variance_target = 0.9;
  int oversample = 10;
  int power_iters = 4;
  std::uint64_t seed = 0;
  VarianceBasis basis = VarianceBasis::Total;
};

// Cumulative-ratio comparisons use this slack so that, e.g., ten ratios of
// exactly 0.1 reach a 0.9 target at the ninth component.
inline constexpr double kVarianceSlack = 1e-9;

struct PcaModel {
  Eigen::VectorXd mean;                  // d
  Eigen::MatrixXd components;            // k x d, orthonormal rows
  std::vector<double> explained_variance;        // k, non-increasing
  std::vector<double> explained_variance_ratio;  // k
  double total_variance = 0.0;
  int retained = 0;                      // 1 <= retained <= k

  int dims() const { return static_cast<int>(mean.size()); }
  int computed() const { return static_cast<int>(components.rows()); }
};

/// k = min(cap, n-1, d) components from randomized SVD of the centered rows,
/// then truncation to the shortest prefix whose cumulative ratio reaches the
/// target (or all k when none does). Oversampling is reduced when k + oversample
/// would exceed min(n, d). Throws InsufficientDataError for n < 2.
PcaModel pca_fit(const FeatureMatrix& train, const PcaOptions& options = {});

/// Projects (x - mean) onto the first `retained` components.
FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& m);

/// Smallest prefix length reaching target, clamped to [1, ratios.size()].
int retained_for(const std::vector<double>& ratios, double target);

// Entries: mean [d], components [k, d], explained_variance [k],
// explained_variance_ratio [k], total_variance, retained (scalars).
// Values are stored as float32, so a round trip is not lossless.
Container pca_to_container(const PcaModel& model);
PcaModel pca_from_container(const Container& container);

}  // namespace irisfeat
