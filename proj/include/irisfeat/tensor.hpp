#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace irisfeat {

struct Shape {
  int channels = 0;
  int height = 0;
  int width = 0;

  std::size_t size() const {
    return static_cast<std::size_t>(channels) * static_cast<std::size_t>(height) *
           static_cast<std::size_t>(width);
  }
  std::size_t plane() const { return static_cast<std::size_t>(height) * static_cast<std::size_t>(width); }
  bool operator==(const Shape&) const = default;
};

std::string to_string(const Shape& shape);

// Dense CHW float32 tensor, channel-major then row-major.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, float fill = 0.0f);
  Tensor(Shape shape, std::vector<float> values);

  const Shape& shape() const { return shape_; }
  int channels() const { return shape_.channels; }
  int height() const { return shape_.height; }
  int width() const { return shape_.width; }
  std::size_t size() const { return values_.size(); }

  std::span<float> values() { return values_; }
  std::span<const float> values() const { return values_; }
  float* data() { return values_.data(); }
  const float* data() const { return values_.data(); }

  float& at(int c, int y, int x) { return values_[index(c, y, x)]; }
  float at(int c, int y, int x) const { return values_[index(c, y, x)]; }

  std::span<float> channel(int c) { return std::span<float>(values_).subspan(c * shape_.plane(), shape_.plane()); }
  std::span<const float> channel(int c) const {
    return std::span<const float>(values_).subspan(c * shape_.plane(), shape_.plane());
  }

  bool operator==(const Tensor&) const = default;

 private:
  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * shape_.height + y) * shape_.width + x;
  }

  Shape shape_;
  std::vector<float> values_;
};

float max_abs_diff(const Tensor& a, const Tensor& b);

}  // namespace irisfeat
