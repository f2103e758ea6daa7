#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "irisfeat/tensor.hpp"

namespace irisfeat {

// n x d row-major feature matrix for one tap.
struct FeatureMatrix {
  int n = 0;
  int d = 0;
  std::vector<float> data;
  std::vector<std::uint32_t> labels;
  int tap = 0;
  std::string layer_name;

  std::span<float> row(int i) { return std::span<float>(data).subspan(static_cast<std::size_t>(i) * d, d); }
  std::span<const float> row(int i) const {
    return std::span<const float>(data).subspan(static_cast<std::size_t>(i) * d, d);
  }
  float at(int i, int j) const { return data[static_cast<std::size_t>(i) * d + j]; }

  /// Throws ShapeError when data/labels sizes disagree with n, d.
  void validate() const;
  bool operator==(const FeatureMatrix&) const = default;
};

/// Same storage order as the tensor (channel-major, then row-major).
std::vector<float> flatten(const Tensor& tap);
Tensor unflatten(std::span<const float> values, const Shape& shape);

/// Rows picked by index, metadata carried over.
FeatureMatrix select_rows(const FeatureMatrix& m, std::span<const std::size_t> rows);

struct MinMaxScaler {
  std::vector<float> mins;
  std::vector<float> maxs;
};

MinMaxScaler minmax_fit(const FeatureMatrix& train);

/// (x - min) / (max - min) per column; constant columns map to 0; no clipping.
FeatureMatrix minmax_transform(const MinMaxScaler& scaler, FeatureMatrix m);

// LPFM layout, little-endian:
//   "LPFM" | version u32 | n u32 | d u32 | tap u16 | name length u16 | UTF-8 name
//   | labels u32 x n | data f32 x n*d | CRC32 of every preceding byte
std::vector<std::uint8_t> encode_features(const FeatureMatrix& m);
FeatureMatrix decode_features(std::span<const std::uint8_t> bytes);
void write_features(const std::filesystem::path& path, const FeatureMatrix& m);
FeatureMatrix read_features(const std::filesystem::path& path);

}  // namespace irisfeat
