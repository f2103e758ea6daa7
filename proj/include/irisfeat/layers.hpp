#pragma once

#include <vector>

#include "irisfeat/tensor.hpp"

namespace irisfeat {

// Cross-correlation with zero padding. weights are out x in x kh x kw;
// an empty bias means no bias term.
struct ConvSpec {
  int in_channels = 0;
  int out_channels = 0;
  int kernel_h = 1, kernel_w = 1;
  int stride_h = 1, stride_w = 1;
  int pad_h = 0, pad_w = 0;
  std::vector<float> weights;
  std::vector<float> bias;

  std::size_t weight_count() const {
    return static_cast<std::size_t>(out_channels) * in_channels * kernel_h * kernel_w;
  }
  void validate() const;
};

struct BatchNormParams {
  std::vector<float> gamma, beta, mean, variance;
  float epsilon = 1.001e-5f;

  std::size_t channels() const { return gamma.size(); }
  void validate() const;
};

/// Output spatial size along one axis; 0 or negative means the window does not fit.
inline int conv_output_size(int in, int kernel, int stride, int pad) { return (in + 2 * pad - kernel) / stride + 1; }

Tensor conv2d(const Tensor& input, const ConvSpec& spec);

Tensor batchnorm(Tensor input, const BatchNormParams& params);
void batchnorm_inplace(Tensor& t, const BatchNormParams& params);

Tensor relu(Tensor input);
void relu_inplace(Tensor& t);

/// Window max; padded cells behave as -infinity.
Tensor maxpool(const Tensor& input, int kernel, int stride, int padding);

/// Per-channel spatial mean.
std::vector<float> global_avg_pool(const Tensor& input);

}  // namespace irisfeat
