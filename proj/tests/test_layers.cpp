#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "irisfeat/errors.hpp"
#include "irisfeat/layers.hpp"
#include "oracles/fixtures.hpp"
#include "oracles/naive_conv.hpp"

using namespace irisfeat;

namespace {

ConvSpec random_spec(std::mt19937_64& gen, const oracle::ConvGeometry& g, bool with_bias) {
  ConvSpec s;
  s.in_channels = g.in_c;
  s.out_channels = g.out_c;
  s.kernel_h = g.kh;
  s.kernel_w = g.kw;
  s.stride_h = g.sh;
  s.stride_w = g.sw;
  s.pad_h = g.ph;
  s.pad_w = g.pw;
  s.weights = fixture::uniform_floats(s.weight_count(), gen);
  if (with_bias) s.bias = fixture::uniform_floats(g.out_c, gen);
  return s;
}

float conv_vs_oracle(std::mt19937_64& gen, const oracle::ConvGeometry& g, bool with_bias) {
  const auto spec = random_spec(gen, g, with_bias);
  const Tensor input({g.in_c, g.in_h, g.in_w}, fixture::uniform_floats(static_cast<std::size_t>(g.in_c) * g.in_h * g.in_w, gen));
  const auto out = conv2d(input, spec);
  REQUIRE(out.shape() == Shape{g.out_c, g.out_h(), g.out_w()});
  const auto expected = oracle::naive_conv({input.values().begin(), input.values().end()}, spec.weights, spec.bias, g);
  return max_abs_diff(out, Tensor(out.shape(), expected));
}

}  // namespace

TEST_CASE("1x1 identity convolution returns the input") {
  std::mt19937_64 gen(1);
  const Tensor input({4, 6, 7}, fixture::uniform_floats(4 * 6 * 7, gen));
  ConvSpec s;
  s.in_channels = s.out_channels = 4;
  s.weights.assign(16, 0.0f);
  for (int i = 0; i < 4; ++i) s.weights[i * 4 + i] = 1.0f;
  CHECK(conv2d(input, s) == input);
}

TEST_CASE("small 3x3 convolution matches the direct oracle") {
  std::mt19937_64 gen(2);
  CHECK(conv_vs_oracle(gen, {3, 5, 5, 4, 3, 3, 1, 1, 0, 0}, false) <= 1e-5f);
  CHECK(conv_vs_oracle(gen, {3, 5, 5, 4, 3, 3, 1, 1, 1, 1}, true) <= 1e-5f);
}

TEST_CASE("random convolution shapes match the direct oracle") {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> ch(1, 8), sp(1, 14), k(1, 7), st(1, 3), pd(0, 3);
  int checked = 0;
  while (checked < 100) {
    oracle::ConvGeometry g{ch(gen), sp(gen), sp(gen), ch(gen), k(gen), k(gen), st(gen), st(gen), pd(gen), pd(gen)};
    if (g.out_h() < 1 || g.out_w() < 1) continue;
    const float diff = conv_vs_oracle(gen, g, checked % 2 == 0);
    INFO("shape #" << checked);
    REQUIRE(diff <= 1e-5f);
    ++checked;
  }
}

TEST_CASE("stem geometry on a 64x512 input") {
  ConvSpec s;
  s.in_channels = 3;
  s.out_channels = 64;
  s.kernel_h = s.kernel_w = 7;
  s.stride_h = s.stride_w = 2;
  s.pad_h = s.pad_w = 3;
  s.weights.assign(s.weight_count(), 0.0f);
  const auto out = conv2d(Tensor({3, 64, 512}), s);
  CHECK(out.shape() == Shape{64, 32, 256});
  CHECK(out.size() == 524288u);
}

TEST_CASE("convolution shape errors") {
  ConvSpec s;
  s.in_channels = 2;
  s.out_channels = 1;
  s.kernel_h = s.kernel_w = 5;
  s.weights.assign(s.weight_count(), 0.0f);
  CHECK_THROWS_AS(conv2d(Tensor({3, 8, 8}), s), ShapeError);
  CHECK_THROWS_AS(conv2d(Tensor({2, 3, 8}), s), ShapeError);
  s.weights.pop_back();
  CHECK_THROWS_AS(conv2d(Tensor({2, 8, 8}), s), ShapeError);
}

TEST_CASE("near-identity batchnorm") {
  std::mt19937_64 gen(4);
  const Tensor input({3, 4, 5}, fixture::uniform_floats(60, gen, -5, 5));
  BatchNormParams p{{1, 1, 1}, {0, 0, 0}, {0, 0, 0}, {1, 1, 1}, 1.001e-5f};
  const auto out = batchnorm(input, p);
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (input.values()[i] == 0.0f) continue;
    REQUIRE(std::abs(out.values()[i] - input.values()[i]) / std::abs(input.values()[i]) <= p.epsilon);
  }
}

TEST_CASE("batchnorm applies the per-channel affine map") {
  const Tensor input({2, 1, 2}, {1, 2, 3, 4});
  BatchNormParams p{{2, 0.5f}, {1, -1}, {1, 3}, {4, 1}, 0.0001f};
  const auto out = batchnorm(input, p);
  CHECK(out.at(0, 0, 0) == doctest::Approx(1.0));
  CHECK(out.at(0, 0, 1) == doctest::Approx(2.0 / std::sqrt(4.0001) + 1.0));
  CHECK(out.at(1, 0, 1) == doctest::Approx(0.5 / std::sqrt(1.0001) - 1.0));
  CHECK_THROWS_AS(batchnorm(Tensor({3, 1, 1}), p), ShapeError);
  p.epsilon = 0.0f;
  CHECK_THROWS_AS(p.validate(), ParameterError);
}

TEST_CASE("relu") {
  const auto out = relu(Tensor({2, 3, 3}, -0.5f));
  for (float v : out.values()) CHECK(v == 0.0f);
  CHECK(relu(Tensor({1, 1, 2}, {-1.0f, 2.0f})) == Tensor({1, 1, 2}, {0.0f, 2.0f}));
}

TEST_CASE("max pooling treats padding as minus infinity") {
  const Tensor input({1, 2, 2}, {-4, -3, -2, -1});
  const auto out = maxpool(input, 3, 2, 1);
  REQUIRE(out.shape() == Shape{1, 1, 1});
  CHECK(out.at(0, 0, 0) == -1.0f);

  const Tensor ramp({1, 4, 4}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15});
  const auto pooled = maxpool(ramp, 3, 2, 1);
  CHECK(pooled == Tensor({1, 2, 2}, {5, 7, 13, 15}));
  CHECK_THROWS_AS(maxpool(ramp, 2, 1, 2), ShapeError);
}

TEST_CASE("global average pooling") {
  const Tensor input({2, 2, 2}, {1, 2, 3, 4, -1, -1, -1, 5});
  const auto gap = global_avg_pool(input);
  REQUIRE(gap.size() == 2);
  CHECK(gap[0] == doctest::Approx(2.5));
  CHECK(gap[1] == doctest::Approx(0.5));
}
