#pragma once

// Random fixtures for tests. std::mt19937_64 is fully specified by the
// standard, and values drawn here are only compared against oracles, never
// pinned, so the implementation-defined distributions are acceptable.

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "irisfeat/features.hpp"

namespace fixture {

inline std::vector<float> uniform_floats(std::size_t n, std::mt19937_64& gen, float lo = -1.0f, float hi = 1.0f) {
  std::uniform_real_distribution<float> dist(lo, hi);
  std::vector<float> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

inline Eigen::MatrixXd gaussian(int rows, int cols, std::mt19937_64& gen) {
  std::normal_distribution<double> dist;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(gen);
  return m;
}

inline irisfeat::FeatureMatrix to_features(const Eigen::MatrixXd& m, std::vector<std::uint32_t> labels = {}) {
  irisfeat::FeatureMatrix f;
  f.n = static_cast<int>(m.rows());
  f.d = static_cast<int>(m.cols());
  f.data.resize(static_cast<std::size_t>(f.n) * f.d);
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.d; ++j) f.data[static_cast<std::size_t>(i) * f.d + j] = static_cast<float>(m(i, j));
  f.labels = labels.empty() ? std::vector<std::uint32_t>(f.n, 0) : std::move(labels);
  return f;
}

inline Eigen::MatrixXd to_eigen(const irisfeat::FeatureMatrix& f) {
  Eigen::MatrixXd m(f.n, f.d);
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.d; ++j) m(i, j) = f.at(i, j);
  return m;
}

}  // namespace fixture
