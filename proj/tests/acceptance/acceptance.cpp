// Acceptance gate: one PASS/FAIL line per primary criterion, with the time
// budget checked alongside the numeric result. Exit status is non-zero when
// any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "irisfeat/errors.hpp"
#include "irisfeat/eval.hpp"
#include "irisfeat/layers.hpp"
#include "irisfeat/linalg.hpp"
#include "irisfeat/manifest.hpp"
#include "irisfeat/model.hpp"
#include "irisfeat/pca.hpp"
#include "irisfeat/report.hpp"
#include "irisfeat/svm.hpp"
#include "irisfeat/sweep.hpp"
#include "irisfeat/synthgen.hpp"
#include "oracles/fixtures.hpp"
#include "oracles/full_svd.hpp"
#include "oracles/naive_conv.hpp"
#include "oracles/roc_brute.hpp"
#include "oracles/svm_dual_qp.hpp"
#include "support.hpp"

using namespace irisfeat;

namespace {

// Best-tap accuracy of the seed-42 synthetic run, recorded from the first
// verified run and kept as a regression value.
constexpr double kPinnedBestAccuracy = 1.0;
constexpr int kPinnedBestTap = 1;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(const std::string& name, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail << " [over budget]";
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS " : "FAIL ") << name << ":" << o.detail.str() << " (" << std::fixed
            << std::setprecision(2) << secs << "s of " << budget_s << "s)" << std::endl;
  std::cout.unsetf(std::ios::fixed);
}

std::set<int> all_taps(const ModelSpec& m) {
  std::set<int> s;
  for (int t = 1; t <= m.tap_count(); ++t) s.insert(t);
  return s;
}

Tensor random_input(int h, int w, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return Tensor({3, h, w}, fixture::uniform_floats(static_cast<std::size_t>(3) * h * w, gen, 0.0f, 1.0f));
}

void tap_census(Outcome& o) {
  const auto m = build_model("resnet50", WeightInit::Zero);
  const auto r = forward_with_taps(m, Tensor({3, 33, 33}), {});
  o.detail << " taps=" << m.tap_count() << " gap_len=" << r.pooled.size();
  o.require(m.tap_count() == 53, "53 taps");
  o.require(m.tap_names().size() == 53, "53 tap names");
  o.require(r.pooled.size() == 2048, "GAP length 2048");
}

void feature_sizes(Outcome& o) {
  const auto m = build_model("resnet50", WeightInit::Zero);
  const auto r = forward_with_taps(m, Tensor({3, 64, 512}), all_taps(m));
  std::size_t lo = SIZE_MAX, hi = 0;
  for (const auto& [t, tensor] : r.taps) {
    lo = std::min(lo, tensor.size());
    hi = std::max(hi, tensor.size());
  }
  o.detail << " taps=" << r.taps.size() << " min=" << lo << " max=" << hi;
  o.require(r.taps.size() == 53, "53 tap tensors");
  o.require(lo == 16384, "min 16384");
  o.require(hi == 524288, "max 524288");
}

void fully_convolutional(Outcome& o) {
  const auto m = build_model("resnet50", WeightInit::HeNormal, 1);
  std::vector<std::vector<int>> channels;
  for (auto [h, w] : {std::pair{33, 33}, {64, 512}, {224, 224}}) {
    const auto r = forward_with_taps(m, random_input(h, w, h * 1000 + w), all_taps(m));
    std::vector<int> c;
    for (const auto& [t, tensor] : r.taps) c.push_back(tensor.channels());
    channels.push_back(c);
    o.detail << " " << h << "x" << w << ":taps=" << r.taps.size();
    o.require(r.taps.size() == 53 && r.pooled.size() == 2048, "complete forward at " + std::to_string(h) + "x" + std::to_string(w));
  }
  o.require(channels[0] == channels[1] && channels[1] == channels[2], "tap channels independent of input size");
}

void conv_oracle(Outcome& o) {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> ch(1, 8), sp(1, 16), k(1, 7), st(1, 3), pd(0, 3);
  int checked = 0;
  float worst = 0.0f;
  while (checked < 100) {
    oracle::ConvGeometry g{ch(gen), sp(gen), sp(gen), ch(gen), k(gen), k(gen), st(gen), st(gen), pd(gen), pd(gen)};
    if (g.out_h() < 1 || g.out_w() < 1) continue;
    ConvSpec s{g.in_c, g.out_c, g.kh, g.kw, g.sh, g.sw, g.ph, g.pw, {}, {}};
    s.weights = fixture::uniform_floats(s.weight_count(), gen);
    if (checked % 2) s.bias = fixture::uniform_floats(g.out_c, gen);
    const auto in = fixture::uniform_floats(static_cast<std::size_t>(g.in_c) * g.in_h * g.in_w, gen);
    const auto out = conv2d(Tensor({g.in_c, g.in_h, g.in_w}, in), s);
    const Tensor expected(out.shape(), oracle::naive_conv(in, s.weights, s.bias, g));
    worst = std::max(worst, max_abs_diff(out, expected));
    ++checked;
  }
  o.detail << " shapes=" << checked << " max_abs_diff=" << worst;
  o.require(worst <= 1e-5f, "max abs diff <= 1e-5");
}

void pca_oracle(Outcome& o) {
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<int> dim(3, 50);
  double worst_sv = 0.0, worst_angle = 0.0;
  int angle_checks = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const int n = dim(gen), d = dim(gen);
    Eigen::MatrixXd x = fixture::gaussian(n, d, gen);
    x.col(0) *= 5.0;
    x.col(1) *= 3.0;
    const auto f = fixture::to_features(x);
    const auto ref = oracle::full_pca(fixture::to_eigen(f));
    PcaOptions opt;
    opt.seed = static_cast<std::uint64_t>(trial);
    const auto p = pca_fit(f, opt);
    for (int j = 0; j < p.computed(); ++j) {
      const double a = std::sqrt(p.explained_variance[j]);
      const double b = std::sqrt(ref.explained_variance(j));
      worst_sv = std::max(worst_sv, std::abs(a - b) / b);
    }
    const int r = p.retained;
    if (r < ref.explained_variance.size()) {
      const double gap = (std::sqrt(ref.explained_variance(r - 1)) - std::sqrt(ref.explained_variance(r))) /
                         std::sqrt(ref.explained_variance(0));
      if (gap > 1e-3) {
        ++angle_checks;
        worst_angle = std::max(worst_angle, oracle::max_principal_angle(p.components.topRows(r).transpose(),
                                                                        ref.components.leftCols(r)));
      }
    }
  }
  o.detail << " matrices=25 max_rel_sv_err=" << worst_sv << " max_angle=" << worst_angle << " (" << angle_checks
           << " gapped cuts)";
  o.require(worst_sv <= 1e-6, "singular values within 1e-6 rel");
  o.require(worst_angle < 1e-4, "subspace angles < 1e-4");

  const auto basis = fixture::gaussian(3, 50, gen);
  Eigen::MatrixXd sub = fixture::gaussian(40, 3, gen) * basis;
  sub.rowwise() += fixture::gaussian(1, 50, gen).row(0);
  const int r3 = pca_fit(fixture::to_features(sub)).retained;

  Eigen::MatrixXd h = Eigen::MatrixXd::Ones(1, 1);
  while (h.rows() < 16) {
    Eigen::MatrixXd next(2 * h.rows(), 2 * h.rows());
    next << h, h, h, -h;
    h = next;
  }
  const int r9 = pca_fit(fixture::to_features(h.middleCols(1, 10))).retained;
  o.detail << " subspace_retained=" << r3 << " isotropic_retained=" << r9;
  o.require(r3 == 3, "3-dim subspace keeps 3");
  o.require(r9 == 9, "isotropic 10 columns keep 9");
}

void svm_oracle(Outcome& o) {
  const std::vector<float> two{-1.0f, 1.0f};
  const std::vector<int> ty{-1, 1};
  SvmOptions hard;
  hard.C = 1000;
  const auto m = train_binary(RowsView(two, 2, 1), ty, hard);
  o.detail << " hard_margin w=" << m.w[0] << " b=" << m.b;
  o.require(std::abs(m.w[0] - 1.0) < 1e-2 && std::abs(m.b) < 1e-2, "hard margin w=1 b=0 within 1e-2");

  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> nd(4, 20), dd(1, 3);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = nd(gen), d = dd(gen);
    auto x = fixture::uniform_floats(static_cast<std::size_t>(n) * d, gen, -2, 2);
    std::vector<int> y;
    for (int i = 0; i < n; ++i) y.push_back(x[static_cast<std::size_t>(i) * d] + 0.5 * std::sin(3.0 * i) > 0 ? 1 : -1);
    y[0] = 1;
    y[1] = -1;
    Eigen::MatrixXd xe(n, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) xe(i, j) = x[static_cast<std::size_t>(i) * d + j];
    const auto ref = oracle::svm_dual_qp(xe, y, 1.0);
    const auto model = train_binary(RowsView(x, n, d), y, {});
    const double ours = oracle::svm_primal(xe, y, Eigen::Map<const Eigen::VectorXd>(model.w.data(), d), model.b, 1.0);
    worst = std::max(worst, ours - ref.primal);
  }
  o.detail << " tiny_primal_gap=" << worst;
  o.require(worst <= 1e-3, "tiny-problem primal within 1e-3");

  std::normal_distribution<double> noise(0.0, 0.3);
  const double centers[3][2] = {{0, 4}, {4, -2}, {-4, -2}};
  std::vector<float> bx;
  std::vector<std::uint32_t> by;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 20; ++i) {
      bx.push_back(static_cast<float>(centers[c][0] + noise(gen)));
      bx.push_back(static_cast<float>(centers[c][1] + noise(gen)));
      by.push_back(static_cast<std::uint32_t>(c));
    }
  }
  const auto ovr = train_ovr(RowsView(bx, 60, 2), by, {});
  const double blob_acc = accuracy(predict(ovr, RowsView(bx, 60, 2)), by);
  o.detail << " blobs_train_acc=" << blob_acc;
  o.require(blob_acc == 1.0, "separable blobs 100%");

  const std::vector<float> xor_x{0, 0, 1, 1, 0, 1, 1, 0};
  const std::vector<std::uint32_t> xor_y{0, 0, 1, 1};
  double best_xor = 0.0;
  for (double C : {0.01, 1.0, 100.0, 1e4}) {
    SvmOptions opt;
    opt.C = C;
    best_xor = std::max(best_xor, accuracy(predict(train_ovr(RowsView(xor_x, 4, 2), xor_y, opt), RowsView(xor_x, 4, 2)), xor_y));
  }
  o.detail << " xor_best_acc=" << best_xor;
  o.require(best_xor <= 0.75, "XOR at most 75%");
}

void roc_oracle(Outcome& o) {
  std::mt19937_64 gen(13);
  std::normal_distribution<double> g(1.5, 1.0), i(0.0, 1.0);
  std::vector<double> genuine(200), impostor(2000);
  for (auto& s : genuine) s = std::round(g(gen) * 1000) / 1000;
  for (auto& s : impostor) s = std::round(i(gen) * 1000) / 1000;
  const auto curve = roc_from_genuine_impostor(genuine, impostor);
  bool exact = true;
  for (double t : {0.0, 0.0005, 0.001, 0.01, 0.1, 0.5}) exact = exact && tpr_at_fmr(curve, t) == oracle::brute_tpr_at_fmr(genuine, impostor, t);
  o.detail << " tpr@0.001=" << tpr_at_fmr(curve, 0.001);
  o.require(exact, "tpr_at_fmr equals brute-force sweep");

  const auto perfect = roc_from_genuine_impostor(std::vector<double>{3, 4, 5}, std::vector<double>{-1, 0, 2.9});
  o.require(tpr_at_fmr(perfect, 0.0) == 1.0, "perfect separation TPR 1 at FMR 0");

  auto shuffled = genuine;
  std::shuffle(shuffled.begin(), shuffled.end(), gen);
  const auto same = roc_from_genuine_impostor(genuine, shuffled);
  bool diag = true;
  for (const auto& p : same.points) diag = diag && p.tpr == p.fmr;
  o.require(diag, "identical multisets TPR == FMR");
}

void split_contracts(Outcome& o) {
  std::vector<std::uint32_t> labels;
  for (int s = 0; s < 10; ++s)
    for (std::uint32_t c = 0; c < 20; ++c) labels.push_back(c);
  const auto plan = stratified_split(labels, 0.7, 42);
  std::map<std::uint32_t, std::pair<int, int>> per;
  for (auto i : plan.train_indices) ++per[labels[i]].first;
  for (auto i : plan.test_indices) ++per[labels[i]].second;
  bool seven_three = per.size() == 20;
  for (const auto& [c, tt] : per) seven_three = seven_three && tt.first == 7 && tt.second == 3;
  o.detail << " train=" << plan.train_indices.size() << " test=" << plan.test_indices.size();
  o.require(seven_three, "7 train / 3 test per class");
  o.require(stratified_split(labels, 0.7, 42) == plan, "split deterministic");

  // Sub-splits of the 60-row test side with a fixed classifier.
  OvRModel m;
  for (std::uint32_t c = 0; c < 20; ++c) {
    m.classes.push_back(c);
    std::vector<double> w(20, 0.0);
    w[c] = 1.0;
    m.models.push_back({w, 0.0});
  }
  std::mt19937_64 gen(3);
  std::vector<float> x;
  std::vector<std::uint32_t> truth;
  for (auto i : plan.test_indices) {
    auto row = fixture::uniform_floats(20, gen, 0.0f, 1.0f);
    row[labels[i]] += 0.6f;
    x.insert(x.end(), row.begin(), row.end());
    truth.push_back(labels[i]);
  }
  const RowsView view(x, static_cast<int>(truth.size()), 20);
  const auto a = subsplit_stats(m, view, truth, 10, 0.8, 9);
  const auto b = subsplit_stats(m, view, truth, 10, 0.8, 9);
  o.detail << " subsplits=" << a.accuracies.size() << " median=" << a.summary.median;
  o.require(a.accuracies.size() == 10, "exactly 10 sub-split accuracies");
  o.require(a == b, "sub-splits deterministic");
}

void end_to_end(Outcome& o) {
  support::TempDir dir("acceptance");
  SynthConfig synth;  // 20 classes x 10 samples, seed 42
  const auto manifest = generate(synth, dir / "data");
  const auto data = prepare_inputs(load_dataset(manifest), 1);
  const auto model = build_model("mini", WeightInit::HeNormal, 42);
  SweepConfig cfg;  // seed 42, threads 1
  const auto plan = stratified_split(data.labels, 0.7, split_seed(cfg.seed));

  const auto first = layer_sweep(model, data, plan, all_taps(model), cfg);
  const auto files_a = emit(first, dir / "run_a");
  const auto second = layer_sweep(model, data, plan, all_taps(model), cfg);
  emit(second, dir / "run_b");
  bool identical = true;
  for (const auto& f : files_a) identical = identical && support::slurp(f) == support::slurp(dir / "run_b" / f.filename());

  double best = 0.0;
  for (const auto& t : first.taps)
    if (t.tap == first.best_tap) best = t.accuracy;
  const double chance = 1.0 / synth.n_classes;
  const auto roc_csv_text = support::slurp(dir / "run_a" / ("roc_" + std::to_string(first.best_tap) + ".csv"));
  const auto csv_rows = static_cast<std::size_t>(std::count(roc_csv_text.begin(), roc_csv_text.end(), '\n')) - 1;

  o.detail << " taps=" << first.taps.size() << " best_tap=" << first.best_tap << " best_acc=" << best
           << " chance=" << chance << " tpr@0.001=" << first.tpr_at_fmr << " roc_rows=" << csv_rows;
  o.require(first.taps.size() == 8 && first.roc && first.subsplit, "one accuracy per tap and one ROC");
  o.require(identical, "two runs byte-identical");
  o.require(best >= 3 * chance, "best accuracy >= 3x chance");
  o.require(best == kPinnedBestAccuracy && first.best_tap == kPinnedBestTap, "pinned regression value");
  o.require(csv_rows == first.roc->points.size(), "ROC CSV rows match curve points");
}

}  // namespace

int main() {
  criterion("tap census (53 taps, GAP 2048)", 1.0, tap_census);
  criterion("feature-size range on 3x64x512 (16384..524288)", 30.0, feature_sizes);
  criterion("fully convolutional on 33x33, 64x512, 224x224", 60.0, fully_convolutional);
  criterion("convolution vs direct oracle on 100 shapes", 120.0, conv_oracle);
  criterion("PCA vs full-SVD oracle and 90% cutoffs", 120.0, pca_oracle);
  criterion("SVM vs analytic and dual-QP oracles", 120.0, svm_oracle);
  criterion("ROC vs quadratic sweep oracle", 60.0, roc_oracle);
  criterion("split and sub-split contracts", 30.0, split_contracts);
  criterion("end-to-end synthetic sweep (mini, seed 42)", 600.0, end_to_end);
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
