#include "irisfeat/eval.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "irisfeat/errors.hpp"

namespace irisfeat {

RocCurve roc_from_genuine_impostor(std::span<const double> genuine, std::span<const double> impostor) {
  if (genuine.empty() || impostor.empty()) {
    throw DegenerateScoresError("ROC needs genuine and impostor scores (got " + std::to_string(genuine.size()) +
                                " / " + std::to_string(impostor.size()) + ")");
  }
  std::vector<double> gen(genuine.begin(), genuine.end());
  std::vector<double> imp(impostor.begin(), impostor.end());
  std::sort(gen.begin(), gen.end(), std::greater<>());
  std::sort(imp.begin(), imp.end(), std::greater<>());

  RocCurve curve;
  curve.genuine_count = gen.size();
  curve.impostor_count = imp.size();
  const double ng = static_cast<double>(gen.size());
  const double ni = static_cast<double>(imp.size());
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});

  // Merge the two descending lists; emit a point after consuming every score
  // equal to the current threshold.
  std::size_t g = 0, i = 0;
  while (g < gen.size() || i < imp.size()) {
    double t;
    if (g == gen.size()) {
      t = imp[i];
    } else if (i == imp.size()) {
      t = gen[g];
    } else {
      t = std::max(gen[g], imp[i]);
    }
    while (g < gen.size() && gen[g] >= t) ++g;
    while (i < imp.size() && imp[i] >= t) ++i;
    curve.points.push_back({t, static_cast<double>(i) / ni, static_cast<double>(g) / ng});
  }
  return curve;
}

RocCurve roc_from_scores(const OvRModel& model, RowsView x, std::span<const std::uint32_t> truth) {
  if (truth.size() != static_cast<std::size_t>(x.rows)) throw ShapeError("truth length != row count");
  const auto scores = decision_scores(model, x);
  std::vector<double> genuine, impostor;
  genuine.reserve(truth.size());
  impostor.reserve(truth.size() * (model.classes.size() - 1));
  for (int r = 0; r < scores.rows; ++r) {
    for (int c = 0; c < scores.cols; ++c) {
      (model.classes[c] == truth[r] ? genuine : impostor).push_back(scores.at(r, c));
    }
  }
  return roc_from_genuine_impostor(genuine, impostor);
}

double tpr_at_fmr(const RocCurve& curve, double fmr_target) {
  double best = 0.0;
  for (const auto& p : curve.points) {
    if (p.fmr <= fmr_target) best = std::max(best, p.tpr);
  }
  return best;
}

}  // namespace irisfeat
