#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "irisfeat/layers.hpp"
#include "irisfeat/tensor.hpp"

namespace irisfeat {

// Minimum input height/width accepted by forward passes.
inline constexpr int kMinInputSize = 32;

// A conv layer together with the batchnorm that follows it.
struct ConvLayer {
  std::string name;     // e.g. "conv2_block1_1_conv"
  std::string bn_name;  // e.g. "conv2_block1_1_bn"
  ConvSpec conv;
  BatchNormParams bn;
};

struct Bottleneck {
  ConvLayer conv1;  // 1x1, carries the stage stride
  ConvLayer conv2;  // 3x3
  ConvLayer conv3;  // 1x1 expansion
  std::optional<ConvLayer> projection;  // 1x1 shortcut on each stage's first block
};

struct StagePlan {
  int blocks = 0;
  int mid_channels = 0;
  int out_channels = 0;
  int stride = 1;
};

struct ArchitecturePlan {
  std::string preset;
  int in_channels = 3;
  int stem_channels = 64;
  std::vector<StagePlan> stages;
};

/// ResNet-50: 7x7/2 stem, 3x3/2 max pool, stages (3,4,6,3) blocks -> 53 convs.
ArchitecturePlan resnet50_plan();
/// Stem (3->8) plus one stage of two bottlenecks (8->4->4->16) -> 8 convs.
ArchitecturePlan mini_plan();
/// "resnet50" or "mini"; ConfigError otherwise.
ArchitecturePlan plan_for(const std::string& preset);

// Immutable after construction; safe to share across threads.
struct ModelSpec {
  std::string preset;
  ConvLayer stem;
  int pool_kernel = 3, pool_stride = 2, pool_padding = 1;
  std::vector<Bottleneck> blocks;
  // Entry order of the weight file this model came from, if any.
  std::vector<std::string> entry_order;

  int tap_count() const;
  /// Conv layers in tap order (tap i is element i-1).
  std::vector<const ConvLayer*> conv_layers() const;
  std::vector<std::string> tap_names() const;
  int output_channels() const;
};

enum class WeightInit { Zero, HeNormal };

/// Builds the preset with zero conv weights or seeded He-normal weights;
/// batchnorm starts at identity (gamma 1, beta 0, mean 0, variance 1).
ModelSpec build_model(const std::string& preset, WeightInit init, std::uint64_t seed = 0);

// Pre: raw conv output before batchnorm. Post: after the layer's batchnorm and
// any ReLU that directly follows it; for a block's last conv this is the block
// output after the residual add and ReLU.
enum class TapMode { PreActivation, PostActivation };

struct ForwardResult {
  std::map<int, Tensor> taps;
  std::vector<float> pooled;  // global average pool of the final feature map
};

/// Runs the whole network and keeps the requested taps (1-based).
/// Throws InputSizeError if height or width < 32, TapError for out-of-range taps.
ForwardResult forward_with_taps(const ModelSpec& model, const Tensor& input, const std::set<int>& taps,
                                TapMode mode = TapMode::PreActivation);

/// Tap shapes for a given input size, without running convolutions.
std::vector<Shape> tap_shapes(const ModelSpec& model, int height, int width);

/// `tap_index,layer_name` CSV, newline terminated.
std::string tap_table_csv(const ModelSpec& model);

}  // namespace irisfeat
