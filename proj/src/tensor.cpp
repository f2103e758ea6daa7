#include "irisfeat/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "irisfeat/errors.hpp"

namespace irisfeat {

std::string to_string(const Shape& shape) {
  return std::to_string(shape.channels) + "x" + std::to_string(shape.height) + "x" + std::to_string(shape.width);
}

Tensor::Tensor(Shape shape, float fill) : shape_(shape) {
  if (shape.channels < 1 || shape.height < 1 || shape.width < 1) {
    throw ShapeError("tensor dims must be >= 1, got " + to_string(shape));
  }
  values_.assign(shape.size(), fill);
}

Tensor::Tensor(Shape shape, std::vector<float> values) : shape_(shape), values_(std::move(values)) {
  if (shape.channels < 1 || shape.height < 1 || shape.width < 1) {
    throw ShapeError("tensor dims must be >= 1, got " + to_string(shape));
  }
  if (values_.size() != shape.size()) {
    throw ShapeError("tensor " + to_string(shape) + " needs " + std::to_string(shape.size()) + " values, got " +
                     std::to_string(values_.size()));
  }
}

float max_abs_diff(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError("max_abs_diff: " + to_string(a.shape()) + " vs " + to_string(b.shape()));
  }
  float worst = 0.0f;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::fabs(a.values()[i] - b.values()[i]));
  return worst;
}

}  // namespace irisfeat
