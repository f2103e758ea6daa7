#include "irisfeat/layers.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

#include "irisfeat/errors.hpp"

namespace irisfeat {

namespace {

using RowMatrixF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

void ConvSpec::validate() const {
  if (in_channels < 1 || out_channels < 1 || kernel_h < 1 || kernel_w < 1) {
    throw ShapeError("conv channels and kernel dims must be >= 1");
  }
  if (stride_h < 1 || stride_w < 1) throw ShapeError("conv stride must be >= 1");
  if (pad_h < 0 || pad_w < 0) throw ShapeError("conv padding must be >= 0");
  if (weights.size() != weight_count()) {
    throw ShapeError("conv expects " + std::to_string(weight_count()) + " weights, got " +
                     std::to_string(weights.size()));
  }
  if (!bias.empty() && bias.size() != static_cast<std::size_t>(out_channels)) {
    throw ShapeError("conv bias length " + std::to_string(bias.size()) + " != out_channels " +
                     std::to_string(out_channels));
  }
}

void BatchNormParams::validate() const {
  const auto n = gamma.size();
  if (n == 0 || beta.size() != n || mean.size() != n || variance.size() != n) {
    throw ShapeError("batchnorm vectors must share a non-zero length");
  }
  if (!(epsilon > 0.0f)) throw ParameterError("batchnorm epsilon must be positive");
  for (float v : variance) {
    if (!(v >= 0.0f)) throw ParameterError("batchnorm variance must be >= 0");
  }
}

Tensor conv2d(const Tensor& input, const ConvSpec& spec) {
  spec.validate();
  if (input.channels() != spec.in_channels) {
    throw ShapeError("conv2d expects " + std::to_string(spec.in_channels) + " input channels, got " +
                     std::to_string(input.channels()));
  }
  const int h = input.height(), w = input.width();
  const int out_h = conv_output_size(h, spec.kernel_h, spec.stride_h, spec.pad_h);
  const int out_w = conv_output_size(w, spec.kernel_w, spec.stride_w, spec.pad_w);
  if (h + 2 * spec.pad_h < spec.kernel_h || w + 2 * spec.pad_w < spec.kernel_w || out_h < 1 || out_w < 1) {
    throw ShapeError("conv2d output would be empty for input " + to_string(input.shape()));
  }

  Tensor out(Shape{spec.out_channels, out_h, out_w});
  const Eigen::Index patch = static_cast<Eigen::Index>(spec.in_channels) * spec.kernel_h * spec.kernel_w;
  const Eigen::Index pixels = static_cast<Eigen::Index>(out_h) * out_w;
  Eigen::Map<const RowMatrixF> weights(spec.weights.data(), spec.out_channels, patch);
  Eigen::Map<RowMatrixF> result(out.data(), spec.out_channels, pixels);

  const bool pointwise = spec.kernel_h == 1 && spec.kernel_w == 1 && spec.stride_h == 1 && spec.stride_w == 1 &&
                         spec.pad_h == 0 && spec.pad_w == 0;
  if (pointwise) {
    Eigen::Map<const RowMatrixF> cols(input.data(), spec.in_channels, pixels);
    result.noalias() = weights * cols;
  } else {
    // im2col: row (c, ky, kx), column (oy, ox).
    RowMatrixF cols(patch, pixels);
    Eigen::Index row = 0;
    for (int c = 0; c < spec.in_channels; ++c) {
      const auto plane = input.channel(c);
      for (int ky = 0; ky < spec.kernel_h; ++ky) {
        for (int kx = 0; kx < spec.kernel_w; ++kx, ++row) {
          float* dst = cols.row(row).data();
          for (int oy = 0; oy < out_h; ++oy) {
            const int iy = oy * spec.stride_h - spec.pad_h + ky;
            float* line = dst + static_cast<std::size_t>(oy) * out_w;
            if (iy < 0 || iy >= h) {
              std::fill(line, line + out_w, 0.0f);
              continue;
            }
            const float* src = plane.data() + static_cast<std::size_t>(iy) * w;
            for (int ox = 0; ox < out_w; ++ox) {
              const int ix = ox * spec.stride_w - spec.pad_w + kx;
              line[ox] = (ix >= 0 && ix < w) ? src[ix] : 0.0f;
            }
          }
        }
      }
    }
    result.noalias() = weights * cols;
  }

  if (!spec.bias.empty()) {
    for (int c = 0; c < spec.out_channels; ++c) {
      for (float& v : out.channel(c)) v += spec.bias[c];
    }
  }
  return out;
}

void batchnorm_inplace(Tensor& t, const BatchNormParams& p) {
  p.validate();
  if (p.channels() != static_cast<std::size_t>(t.channels())) {
    throw ShapeError("batchnorm has " + std::to_string(p.channels()) + " channels, tensor has " +
                     std::to_string(t.channels()));
  }
  for (int c = 0; c < t.channels(); ++c) {
    const float scale = p.gamma[c] / std::sqrt(p.variance[c] + p.epsilon);
    const float shift = p.beta[c] - p.mean[c] * scale;
    for (float& v : t.channel(c)) v = v * scale + shift;
  }
}

Tensor batchnorm(Tensor input, const BatchNormParams& params) {
  batchnorm_inplace(input, params);
  return input;
}

void relu_inplace(Tensor& t) {
  for (float& v : t.values()) v = std::max(v, 0.0f);
}

Tensor relu(Tensor input) {
  relu_inplace(input);
  return input;
}

Tensor maxpool(const Tensor& input, int kernel, int stride, int padding) {
  if (kernel < 1 || stride < 1 || padding < 0) throw ShapeError("maxpool needs kernel, stride >= 1, padding >= 0");
  if (padding >= kernel) throw ShapeError("maxpool padding must be smaller than the kernel");
  const int out_h = conv_output_size(input.height(), kernel, stride, padding);
  const int out_w = conv_output_size(input.width(), kernel, stride, padding);
  if (out_h < 1 || out_w < 1) throw ShapeError("maxpool window does not fit input " + to_string(input.shape()));

  Tensor out(Shape{input.channels(), out_h, out_w});
  for (int c = 0; c < input.channels(); ++c) {
    for (int oy = 0; oy < out_h; ++oy) {
      const int y0 = std::max(oy * stride - padding, 0);
      const int y1 = std::min(oy * stride - padding + kernel, input.height());
      for (int ox = 0; ox < out_w; ++ox) {
        const int x0 = std::max(ox * stride - padding, 0);
        const int x1 = std::min(ox * stride - padding + kernel, input.width());
        float best = -std::numeric_limits<float>::infinity();
        for (int y = y0; y < y1; ++y) {
          for (int x = x0; x < x1; ++x) best = std::max(best, input.at(c, y, x));
        }
        out.at(c, oy, ox) = best;
      }
    }
  }
  return out;
}

std::vector<float> global_avg_pool(const Tensor& input) {
  std::vector<float> pooled(input.channels());
  for (int c = 0; c < input.channels(); ++c) {
    double sum = 0.0;
    for (float v : input.channel(c)) sum += v;
    pooled[c] = static_cast<float>(sum / static_cast<double>(input.shape().plane()));
  }
  return pooled;
}

}  // namespace irisfeat
