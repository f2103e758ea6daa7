#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "irisfeat/errors.hpp"
#include "irisfeat/model.hpp"
#include "oracles/fixtures.hpp"

using namespace irisfeat;

namespace {

std::set<int> all_taps(const ModelSpec& m) {
  std::set<int> s;
  for (int t = 1; t <= m.tap_count(); ++t) s.insert(t);
  return s;
}

Tensor random_input(int h, int w, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return Tensor({3, h, w}, fixture::uniform_floats(static_cast<std::size_t>(3) * h * w, gen, 0.0f, 1.0f));
}

}  // namespace

TEST_CASE("ResNet-50 preset has 53 conv layers in execution order") {
  const auto m = build_model("resnet50", WeightInit::Zero);
  CHECK(m.tap_count() == 53);
  CHECK(m.blocks.size() == 16);
  CHECK(m.output_channels() == 2048);
  const auto names = m.tap_names();
  REQUIRE(names.size() == 53);
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == 53);
  CHECK(names[0] == "conv1_conv");
  CHECK(names[1] == "conv2_block1_1_conv");
  CHECK(names[3] == "conv2_block1_3_conv");
  CHECK(names[4] == "conv2_block1_0_conv");
  CHECK(names[5] == "conv2_block2_1_conv");
  CHECK(names[52] == "conv5_block3_3_conv");

  const auto csv = tap_table_csv(m);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "tap_index,layer_name");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 53);
  CHECK(csv.back() == '\n');
}

TEST_CASE("ResNet-50 tap sizes on a 64x512 input span 16,384 to 524,288") {
  const auto m = build_model("resnet50", WeightInit::Zero);
  const auto shapes = tap_shapes(m, 64, 512);
  REQUIRE(shapes.size() == 53);
  std::size_t lo = shapes[0].size(), hi = lo;
  for (const auto& s : shapes) {
    lo = std::min(lo, s.size());
    hi = std::max(hi, s.size());
  }
  CHECK(lo == 16384);
  CHECK(hi == 524288);
  CHECK(shapes[0] == Shape{64, 32, 256});
  CHECK(shapes[52] == Shape{2048, 2, 16});
}

TEST_CASE("per-tap channels do not depend on the input size") {
  const auto m = build_model("resnet50", WeightInit::Zero);
  const auto a = tap_shapes(m, 64, 512);
  const auto b = tap_shapes(m, 33, 33);
  const auto c = tap_shapes(m, 224, 224);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].channels == b[i].channels);
    CHECK(a[i].channels == c[i].channels);
  }
}

TEST_CASE("ResNet-50 runs on a 33x33 input and pools to 2048 values") {
  const auto m = build_model("resnet50", WeightInit::HeNormal, 1);
  const auto r = forward_with_taps(m, random_input(33, 33, 2), all_taps(m));
  CHECK(r.taps.size() == 53);
  CHECK(r.pooled.size() == 2048);
  const auto shapes = tap_shapes(m, 33, 33);
  for (const auto& [t, tensor] : r.taps) CHECK(tensor.shape() == shapes[t - 1]);
}

TEST_CASE("mini preset geometry") {
  const auto plan = mini_plan();
  CHECK(plan.stem_channels == 8);
  REQUIRE(plan.stages.size() == 1);
  CHECK(plan.stages[0].blocks == 2);
  CHECK(plan.stages[0].mid_channels == 4);
  CHECK(plan.stages[0].out_channels == 16);
  const auto m = build_model("mini", WeightInit::Zero);
  CHECK(m.tap_count() == 8);
  for (auto [h, w] : {std::pair{33, 33}, {64, 512}, {224, 224}}) {
    const auto r = forward_with_taps(m, random_input(h, w, 3), all_taps(m));
    CHECK(r.taps.size() == 8);
    CHECK(r.pooled.size() == 16);
  }
}

TEST_CASE("zero weights give zero taps, and the identity shortcut carries the block input") {
  auto m = build_model("mini", WeightInit::Zero);
  const auto input = random_input(40, 64, 4);
  const auto pre = forward_with_taps(m, input, all_taps(m));
  for (const auto& [t, tensor] : pre.taps) {
    INFO("tap " << t);
    CHECK(std::all_of(tensor.values().begin(), tensor.values().end(), [](float v) { return v == 0.0f; }));
  }
  // Give block 1 a non-zero output through its last batchnorm shift; block 2
  // then outputs relu(0 + identity) = block 1's output.
  for (auto& b : m.blocks[0].conv3.bn.beta) b = 0.5f;
  m.blocks[0].conv3.bn.beta[3] = -0.25f;
  const auto post = forward_with_taps(m, input, {4, 8}, TapMode::PostActivation);
  CHECK(post.taps.at(8) == post.taps.at(4));
  CHECK(post.taps.at(4).at(0, 0, 0) == 0.5f);
  CHECK(post.taps.at(4).at(3, 0, 0) == 0.0f);
}

TEST_CASE("taps agree with layer-by-layer composition") {
  const auto m = build_model("mini", WeightInit::HeNormal, 9);
  const auto input = random_input(48, 80, 5);
  const auto r = forward_with_taps(m, input, {1, 2});
  const auto stem = conv2d(input, m.stem.conv);
  CHECK(r.taps.at(1) == stem);
  const auto pooled = maxpool(relu(batchnorm(stem, m.stem.bn)), 3, 2, 1);
  CHECK(r.taps.at(2) == conv2d(pooled, m.blocks[0].conv1.conv));

  const auto post = forward_with_taps(m, input, {1}, TapMode::PostActivation);
  CHECK(post.taps.at(1) == relu(batchnorm(stem, m.stem.bn)));
}

TEST_CASE("forward passes are deterministic and seeds matter") {
  const auto a = build_model("mini", WeightInit::HeNormal, 1);
  const auto b = build_model("mini", WeightInit::HeNormal, 1);
  const auto c = build_model("mini", WeightInit::HeNormal, 2);
  CHECK(a.stem.conv.weights == b.stem.conv.weights);
  CHECK(a.stem.conv.weights != c.stem.conv.weights);
  const auto input = random_input(64, 64, 6);
  const auto ra = forward_with_taps(a, input, all_taps(a));
  const auto rb = forward_with_taps(b, input, all_taps(b));
  CHECK(ra.taps == rb.taps);
  CHECK(ra.pooled == rb.pooled);
}

TEST_CASE("forward error paths") {
  const auto m = build_model("mini", WeightInit::Zero);
  CHECK_THROWS_AS(forward_with_taps(m, Tensor({3, 31, 64}), {}), InputSizeError);
  CHECK_THROWS_AS(forward_with_taps(m, Tensor({3, 64, 20}), {}), InputSizeError);
  CHECK_THROWS_AS(forward_with_taps(m, Tensor({1, 64, 64}), {}), ShapeError);
  CHECK_THROWS_AS(forward_with_taps(m, Tensor({3, 64, 64}), {0}), TapError);
  CHECK_THROWS_AS(forward_with_taps(m, Tensor({3, 64, 64}), {9}), TapError);
  CHECK_NOTHROW(forward_with_taps(m, Tensor({3, 32, 32}), {8}));
  CHECK_THROWS_AS(build_model("vgg16", WeightInit::Zero), ConfigError);
}
