#include "irisfeat/pca.hpp"

#include <algorithm>

#include "irisfeat/errors.hpp"
#include "irisfeat/linalg.hpp"

namespace irisfeat {

int retained_for(const std::vector<double>& ratios, double target) {
  double cumulative = 0.0;
  for (std::size_t m = 0; m < ratios.size(); ++m) {
    cumulative += ratios[m];
    if (cumulative >= target - kVarianceSlack) return static_cast<int>(m) + 1;
  }
  return std::max<int>(1, static_cast<int>(ratios.size()));
}

PcaModel pca_fit(const FeatureMatrix& train, const PcaOptions& options) {
  train.validate();
  if (train.n < 2) throw InsufficientDataError("PCA needs at least 2 rows, got " + std::to_string(train.n));
  if (options.cap < 1) throw ParameterError("PCA cap must be >= 1");
  if (!(options.variance_target > 0.0 && options.variance_target <= 1.0)) {
    throw ParameterError("variance_target must be in (0, 1]");
  }

  const int n = train.n;
  const int d = train.d;
  Eigen::MatrixXd centered(n, d);
  for (int i = 0; i < n; ++i) {
    const auto r = train.row(i);
    for (int j = 0; j < d; ++j) centered(i, j) = r[j];
  }
  PcaModel model;
  model.mean = centered.colwise().mean().transpose();
  centered.rowwise() -= model.mean.transpose();
  model.total_variance = centered.squaredNorm() / (n - 1);

  const int k = std::min({options.cap, n - 1, d});
  const int room = std::min(n, d) - k;
  RandomizedSvdOptions svd_options{std::min(options.oversample, room), options.power_iters, options.seed};
  const SvdResult svd = randomized_svd(centered, k, svd_options);

  model.components = svd.V.transpose();
  model.explained_variance.resize(k);
  for (int j = 0; j < k; ++j) model.explained_variance[j] = svd.S(j) * svd.S(j) / (n - 1);

  double denominator = model.total_variance;
  if (options.basis == VarianceBasis::Captured) {
    denominator = 0.0;
    for (double v : model.explained_variance) denominator += v;
  }
  model.explained_variance_ratio.assign(k, 0.0);
  if (denominator > 0.0) {
    for (int j = 0; j < k; ++j) model.explained_variance_ratio[j] = model.explained_variance[j] / denominator;
    model.retained = retained_for(model.explained_variance_ratio, options.variance_target);
  } else {
    model.retained = k;  // no variance at all: nothing to rank, keep everything
  }
  return model;
}

FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& m) {
  m.validate();
  if (m.d != model.dims()) {
    throw ShapeError("PCA fitted on d=" + std::to_string(model.dims()) + ", matrix has d=" + std::to_string(m.d));
  }
  const int keep = model.retained;
  FeatureMatrix out;
  out.n = m.n;
  out.d = keep;
  out.labels = m.labels;
  out.tap = m.tap;
  out.layer_name = m.layer_name;
  out.data.resize(static_cast<std::size_t>(m.n) * keep);

  const auto basis = model.components.topRows(keep);
  Eigen::VectorXd x(m.d);
  for (int i = 0; i < m.n; ++i) {
    const auto r = m.row(i);
    for (int j = 0; j < m.d; ++j) x(j) = static_cast<double>(r[j]) - model.mean(j);
    const Eigen::VectorXd y = basis * x;
    for (int j = 0; j < keep; ++j) out.data[static_cast<std::size_t>(i) * keep + j] = static_cast<float>(y(j));
  }
  return out;
}

Container pca_to_container(const PcaModel& model) {
  Container c;
  const auto d = static_cast<std::uint32_t>(model.dims());
  const auto k = static_cast<std::uint32_t>(model.computed());
  std::vector<float> mean(model.mean.data(), model.mean.data() + model.mean.size());
  c.add("mean", {d}, std::vector<float>(mean.begin(), mean.end()));
  std::vector<float> comps(static_cast<std::size_t>(k) * d);
  for (std::uint32_t i = 0; i < k; ++i) {
    for (std::uint32_t j = 0; j < d; ++j) comps[i * d + j] = static_cast<float>(model.components(i, j));
  }
  c.add("components", {k, d}, std::move(comps));
  c.add("explained_variance", {k},
        std::vector<float>(model.explained_variance.begin(), model.explained_variance.end()));
  c.add("explained_variance_ratio", {k},
        std::vector<float>(model.explained_variance_ratio.begin(), model.explained_variance_ratio.end()));
  c.add_scalar("total_variance", static_cast<float>(model.total_variance));
  c.add_scalar("retained", static_cast<float>(model.retained));
  return c;
}

PcaModel pca_from_container(const Container& c) {
  const auto need = [&](const std::string& name) -> const ContainerEntry& {
    const auto* e = c.find(name);
    if (!e) throw CompletenessError("PCA container lacks entry '" + name + "'");
    return *e;
  };
  const auto& mean = need("mean");
  const auto& comps = need("components");
  const auto& ev = need("explained_variance");
  const auto& ratio = need("explained_variance_ratio");
  if (mean.dims.size() != 1 || comps.dims.size() != 2 || comps.dims[1] != mean.dims[0] ||
      ev.values.size() != comps.dims[0] || ratio.values.size() != comps.dims[0]) {
    throw ShapeError("PCA container entries have inconsistent dims");
  }
  PcaModel m;
  const auto d = mean.dims[0];
  const auto k = comps.dims[0];
  m.mean = Eigen::VectorXd(d);
  for (std::uint32_t j = 0; j < d; ++j) m.mean(j) = mean.values[j];
  m.components = Eigen::MatrixXd(k, d);
  for (std::uint32_t i = 0; i < k; ++i) {
    for (std::uint32_t j = 0; j < d; ++j) m.components(i, j) = comps.values[i * d + j];
  }
  m.explained_variance.assign(ev.values.begin(), ev.values.end());
  m.explained_variance_ratio.assign(ratio.values.begin(), ratio.values.end());
  m.total_variance = need("total_variance").values.at(0);
  m.retained = static_cast<int>(need("retained").values.at(0));
  if (m.retained < 1 || m.retained > static_cast<int>(k)) throw FormatError("PCA retained count out of range");
  return m;
}

}  // namespace irisfeat
