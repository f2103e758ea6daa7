#include "irisfeat/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "irisfeat/errors.hpp"
#include "irisfeat/parallel.hpp"
#include "irisfeat/rng.hpp"

namespace irisfeat {

namespace {

double augmented_dot(const std::vector<double>& w, std::span<const float> x) {
  double s = w.back();
  for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * x[j];
  return s;
}

void check_options(const SvmOptions& o) {
  if (!(o.C > 0.0)) throw ParameterError("SVM C must be positive");
  if (!(o.tol > 0.0)) throw ParameterError("SVM tol must be positive");
  if (o.max_iter < 1) throw ParameterError("SVM max_iter must be >= 1");
}

double dual_objective(const std::vector<double>& w_aug, const std::vector<double>& alpha, double diag) {
  double sum_alpha = 0.0, reg = 0.0;
  for (double a : alpha) {
    sum_alpha += a;
    reg += a * a;
  }
  double norm = 0.0;
  for (double v : w_aug) norm += v * v;
  return sum_alpha - 0.5 * norm - 0.5 * diag * reg;
}

}  // namespace

double LinearBinaryModel::decision(std::span<const float> x) const {
  double s = b;
  for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * x[j];
  return s;
}

double primal_objective(const LinearBinaryModel& model, RowsView x, std::span<const int> y, const SvmOptions& o) {
  double norm = model.b * model.b;
  for (double v : model.w) norm += v * v;
  double loss = 0.0;
  for (int i = 0; i < x.rows; ++i) {
    const double slack = std::max(0.0, 1.0 - y[i] * model.decision(x.row(i)));
    loss += o.loss == HingeLoss::L1 ? slack : slack * slack;
  }
  return 0.5 * norm + o.C * loss;
}

LinearBinaryModel train_binary(RowsView x, std::span<const int> y, const SvmOptions& options, SvmTrace* trace) {
  check_options(options);
  if (x.rows < 1) throw InsufficientDataError("SVM needs at least one row");
  if (y.size() != static_cast<std::size_t>(x.rows) || x.data.size() != static_cast<std::size_t>(x.rows) * x.cols) {
    throw ShapeError("SVM rows, labels and data length disagree");
  }
  for (int v : y) {
    if (v != 1 && v != -1) throw ParameterError("SVM labels must be +1 or -1");
  }

  const int n = x.rows;
  const int d = x.cols;
  // Canonical visiting order makes training independent of input row order.
  std::vector<int> canon(n);
  std::iota(canon.begin(), canon.end(), 0);
  std::stable_sort(canon.begin(), canon.end(), [&](int a, int b) {
    const auto ra = x.row(a), rb = x.row(b);
    const auto cmp = std::lexicographical_compare_three_way(ra.begin(), ra.end(), rb.begin(), rb.end(),
                                                            [](float p, float q) { return std::weak_order(p, q); });
    if (cmp != 0) return cmp < 0;
    return y[a] < y[b];
  });

  const bool l1 = options.loss == HingeLoss::L1;
  const double upper = l1 ? options.C : std::numeric_limits<double>::infinity();
  const double diag = l1 ? 0.0 : 0.5 / options.C;

  std::vector<double> qd(n);
  for (int i = 0; i < n; ++i) {
    double s = 1.0;  // augmented constant feature
    for (float v : x.row(i)) s += static_cast<double>(v) * v;
    qd[i] = s + diag;
  }

  std::vector<double> alpha(n, 0.0);
  std::vector<double> w(static_cast<std::size_t>(d) + 1, 0.0);
  std::vector<int> order(canon);
  Rng rng(options.seed);

  int epoch = 0;
  double violation = 0.0;
  bool converged = false;
  while (epoch < options.max_iter) {
    std::copy(canon.begin(), canon.end(), order.begin());
    shuffle(std::span<int>(order), rng);
    violation = 0.0;
    for (int i : order) {
      const auto xi = x.row(i);
      const double g = y[i] * augmented_dot(w, xi) - 1.0 + diag * alpha[i];
      double pg = g;
      if (alpha[i] == 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha[i] == upper) {
        pg = std::max(g, 0.0);
      }
      violation = std::max(violation, std::abs(pg));
      if (pg != 0.0) {
        const double old = alpha[i];
        alpha[i] = std::min(std::max(old - g / qd[i], 0.0), upper);
        const double step = (alpha[i] - old) * y[i];
        if (step != 0.0) {
          for (int j = 0; j < d; ++j) w[j] += step * xi[j];
          w[d] += step;
        }
      }
    }
    ++epoch;
    if (trace) {
      LinearBinaryModel snapshot{std::vector<double>(w.begin(), w.end() - 1), w.back()};
      trace->primal.push_back(primal_objective(snapshot, x, y, options));
      trace->dual.push_back(dual_objective(w, alpha, diag));
    }
    if (violation < options.tol) {
      converged = true;
      break;
    }
  }

  if (trace) {
    trace->alpha = alpha;
    trace->epochs = epoch;
    trace->max_violation = violation;
    trace->converged = converged;
  }
  LinearBinaryModel model;
  model.b = w.back();
  w.pop_back();
  model.w = std::move(w);
  return model;
}

OvRModel train_ovr(RowsView x, std::span<const std::uint32_t> labels, const SvmOptions& options, int threads) {
  check_options(options);
  if (labels.size() != static_cast<std::size_t>(x.rows)) throw ShapeError("label count != row count");
  OvRModel model;
  model.C = options.C;
  model.classes.assign(labels.begin(), labels.end());
  std::sort(model.classes.begin(), model.classes.end());
  model.classes.erase(std::unique(model.classes.begin(), model.classes.end()), model.classes.end());
  if (model.classes.size() < 2) throw DegenerateLabelsError("one-vs-rest needs at least two classes");

  model.models.resize(model.classes.size());
  parallel_for(model.classes.size(), threads, [&](std::size_t c) {
    std::vector<int> y(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == model.classes[c] ? 1 : -1;
    SvmOptions opts = options;
    opts.seed = derive_seed(options.seed, "svm.class", model.classes[c]);
    model.models[c] = train_binary(x, y, opts);
  });
  return model;
}

ScoreMatrix decision_scores(const OvRModel& model, RowsView x) {
  if (model.models.empty()) throw ParameterError("empty one-vs-rest model");
  if (x.cols != model.dims()) {
    throw ShapeError("model expects d=" + std::to_string(model.dims()) + ", got d=" + std::to_string(x.cols));
  }
  ScoreMatrix s{x.rows, static_cast<int>(model.classes.size()), {}};
  s.values.resize(static_cast<std::size_t>(s.rows) * s.cols);
  for (int i = 0; i < x.rows; ++i) {
    const auto xi = x.row(i);
    for (int c = 0; c < s.cols; ++c) s.values[static_cast<std::size_t>(i) * s.cols + c] = model.models[c].decision(xi);
  }
  return s;
}

std::vector<std::uint32_t> predict(const OvRModel& model, RowsView x) {
  const auto scores = decision_scores(model, x);
  std::vector<std::uint32_t> out(static_cast<std::size_t>(x.rows));
  for (int i = 0; i < x.rows; ++i) {
    int best = 0;
    for (int c = 1; c < scores.cols; ++c) {
      if (scores.at(i, c) > scores.at(i, best)) best = c;
    }
    out[i] = model.classes[best];
  }
  return out;
}

Container ovr_to_container(const OvRModel& model) {
  Container c;
  const auto count = static_cast<std::uint32_t>(model.classes.size());
  c.add("classes", {count}, std::vector<float>(model.classes.begin(), model.classes.end()));
  c.add_scalar("C", static_cast<float>(model.C));
  for (std::size_t k = 0; k < model.classes.size(); ++k) {
    const auto prefix = "class." + std::to_string(model.classes[k]);
    const auto& m = model.models[k];
    c.add(prefix + ".w", {static_cast<std::uint32_t>(m.w.size())}, std::vector<float>(m.w.begin(), m.w.end()));
    c.add_scalar(prefix + ".b", static_cast<float>(m.b));
  }
  return c;
}

OvRModel ovr_from_container(const Container& c) {
  const auto need = [&](const std::string& name) -> const ContainerEntry& {
    const auto* e = c.find(name);
    if (!e) throw CompletenessError("SVM container lacks entry '" + name + "'");
    return *e;
  };
  OvRModel model;
  for (float v : need("classes").values) model.classes.push_back(static_cast<std::uint32_t>(v));
  model.C = need("C").values.at(0);
  for (auto cls : model.classes) {
    const auto prefix = "class." + std::to_string(cls);
    const auto& w = need(prefix + ".w");
    LinearBinaryModel m;
    m.w.assign(w.values.begin(), w.values.end());
    m.b = need(prefix + ".b").values.at(0);
    if (!model.models.empty() && m.w.size() != model.models.front().w.size()) {
      throw ShapeError("class " + std::to_string(cls) + " weight length differs");
    }
    model.models.push_back(std::move(m));
  }
  return model;
}

}  // namespace irisfeat
