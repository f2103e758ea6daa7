#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "irisfeat/container.hpp"
#include "irisfeat/features.hpp"

namespace irisfeat {

// Non-owning row-major view.
struct RowsView {
  std::span<const float> data;
  int rows = 0;
  int cols = 0;

  RowsView() = default;
  RowsView(std::span<const float> values, int n, int d) : data(values), rows(n), cols(d) {}
  explicit RowsView(const FeatureMatrix& m) : data(m.data), rows(m.n), cols(m.d) {}
  std::span<const float> row(int i) const { return data.subspan(static_cast<std::size_t>(i) * cols, cols); }
};

enum class HingeLoss { L1, Squared };

struct SvmOptions {
  double C = 1.0;
  double tol = 1e-4;
  int max_iter = 1000;  // epochs
  std::uint64_t seed = 0;
  HingeLoss loss = HingeLoss::L1;
};

struct LinearBinaryModel {
  std::vector<double> w;
  double b = 0.0;

  double decision(std::span<const float> x) const;
};

// Optional per-epoch diagnostics from train_binary.
struct SvmTrace {
  std::vector<double> primal;  // objective after each epoch
  std::vector<double> dual;
  std::vector<double> alpha;   // final dual variables, in input row order
  int epochs = 0;
  double max_violation = 0.0;
  bool converged = false;
};

/// Primal objective (1/2)(|w|^2 + b^2) + C * sum(loss_i) of the bias-augmented problem.
double primal_objective(const LinearBinaryModel& model, RowsView x, std::span<const int> y, const SvmOptions& options);

/// Dual coordinate descent on the bias-augmented problem (a constant 1 feature
/// carries the bias, so b is regularized together with w). Rows are visited in
/// a canonical order (lexicographic by features, then label) reshuffled each
/// epoch by the seeded Rng, so permuting the input rows does not change the
/// result. Stops when the largest projected-gradient magnitude drops below tol
/// or after max_iter epochs. y must be +1/-1.
LinearBinaryModel train_binary(RowsView x, std::span<const int> y, const SvmOptions& options,
                               SvmTrace* trace = nullptr);

struct OvRModel {
  std::vector<std::uint32_t> classes;  // sorted, unique
  std::vector<LinearBinaryModel> models;
  double C = 1.0;

  int dims() const { return models.empty() ? 0 : static_cast<int>(models.front().w.size()); }
};

/// One binary model per class (class rows +1, rest -1); class c is trained with
/// seed derive_seed(options.seed, "svm.class", c). Throws DegenerateLabelsError
/// with fewer than two classes.
OvRModel train_ovr(RowsView x, std::span<const std::uint32_t> labels, const SvmOptions& options, int threads = 1);

struct ScoreMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  double at(int i, int c) const { return values[static_cast<std::size_t>(i) * cols + c]; }
};

ScoreMatrix decision_scores(const OvRModel& model, RowsView x);
/// Argmax of the scores; ties go to the lowest class id.
std::vector<std::uint32_t> predict(const OvRModel& model, RowsView x);

// Entries: classes [k], C, and per class "class.<id>.w" [d] / "class.<id>.b".
Container ovr_to_container(const OvRModel& model);
OvRModel ovr_from_container(const Container& container);

}  // namespace irisfeat
