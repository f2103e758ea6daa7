#include "irisfeat/model.hpp"

#include <cmath>

#include "irisfeat/errors.hpp"
#include "irisfeat/rng.hpp"

namespace irisfeat {

namespace {

ConvLayer make_layer(const std::string& base, int in, int out, int kernel, int stride, int pad) {
  ConvLayer layer;
  layer.name = base + "_conv";
  layer.bn_name = base + "_bn";
  layer.conv.in_channels = in;
  layer.conv.out_channels = out;
  layer.conv.kernel_h = layer.conv.kernel_w = kernel;
  layer.conv.stride_h = layer.conv.stride_w = stride;
  layer.conv.pad_h = layer.conv.pad_w = pad;
  layer.conv.weights.assign(layer.conv.weight_count(), 0.0f);
  layer.bn.gamma.assign(out, 1.0f);
  layer.bn.beta.assign(out, 0.0f);
  layer.bn.mean.assign(out, 0.0f);
  layer.bn.variance.assign(out, 1.0f);
  return layer;
}

void he_normal(ConvLayer& layer, Rng& rng) {
  const double fan_in = static_cast<double>(layer.conv.in_channels) * layer.conv.kernel_h * layer.conv.kernel_w;
  const double sd = std::sqrt(2.0 / fan_in);
  for (float& w : layer.conv.weights) w = static_cast<float>(sd * rng.normal());
}

void check_input(const ModelSpec& model, const Shape& shape) {
  if (shape.height < kMinInputSize || shape.width < kMinInputSize) {
    throw InputSizeError("input " + to_string(shape) + " is smaller than " + std::to_string(kMinInputSize) + "x" +
                         std::to_string(kMinInputSize));
  }
  if (shape.channels != model.stem.conv.in_channels) {
    throw ShapeError("model expects " + std::to_string(model.stem.conv.in_channels) + " input channels, got " +
                     std::to_string(shape.channels));
  }
}

// Runs conv + bn (+ relu) and records the tap if requested.
class TapRecorder {
 public:
  TapRecorder(const std::set<int>& wanted, TapMode mode, std::map<int, Tensor>& out)
      : wanted_(wanted), mode_(mode), out_(out) {}

  Tensor conv_bn(const ConvLayer& layer, const Tensor& x, bool apply_relu, bool tap_after_bn) {
    ++counter_;
    const bool keep = wanted_.contains(counter_);
    Tensor y = conv2d(x, layer.conv);
    if (keep && mode_ == TapMode::PreActivation) out_.emplace(counter_, y);
    batchnorm_inplace(y, layer.bn);
    if (apply_relu) relu_inplace(y);
    if (keep && mode_ == TapMode::PostActivation && tap_after_bn) out_.emplace(counter_, y);
    return y;
  }

  // For taps whose post-activation value is only known after the residual add.
  void record_post(int index, const Tensor& t) {
    if (mode_ == TapMode::PostActivation && wanted_.contains(index)) out_.emplace(index, t);
  }

  int counter() const { return counter_; }

 private:
  const std::set<int>& wanted_;
  TapMode mode_;
  std::map<int, Tensor>& out_;
  int counter_ = 0;
};

}  // namespace

ArchitecturePlan resnet50_plan() {
  return {"resnet50", 3, 64, {{3, 64, 256, 1}, {4, 128, 512, 2}, {6, 256, 1024, 2}, {3, 512, 2048, 2}}};
}

ArchitecturePlan mini_plan() { return {"mini", 3, 8, {{2, 4, 16, 1}}}; }

ArchitecturePlan plan_for(const std::string& preset) {
  if (preset == "resnet50") return resnet50_plan();
  if (preset == "mini") return mini_plan();
  throw ConfigError("unknown preset '" + preset + "' (expected resnet50 or mini)");
}

int ModelSpec::tap_count() const {
  int n = 1;
  for (const auto& b : blocks) n += b.projection ? 4 : 3;
  return n;
}

std::vector<const ConvLayer*> ModelSpec::conv_layers() const {
  std::vector<const ConvLayer*> layers{&stem};
  for (const auto& b : blocks) {
    layers.push_back(&b.conv1);
    layers.push_back(&b.conv2);
    layers.push_back(&b.conv3);
    if (b.projection) layers.push_back(&*b.projection);
  }
  return layers;
}

std::vector<std::string> ModelSpec::tap_names() const {
  std::vector<std::string> names;
  for (const auto* layer : conv_layers()) names.push_back(layer->name);
  return names;
}

int ModelSpec::output_channels() const {
  return blocks.empty() ? stem.conv.out_channels : blocks.back().conv3.conv.out_channels;
}

ModelSpec build_model(const std::string& preset, WeightInit init, std::uint64_t seed) {
  const auto plan = plan_for(preset);
  ModelSpec model;
  model.preset = plan.preset;
  model.stem = make_layer("conv1", plan.in_channels, plan.stem_channels, 7, 2, 3);
  int in = plan.stem_channels;
  for (std::size_t s = 0; s < plan.stages.size(); ++s) {
    const auto& stage = plan.stages[s];
    const auto stage_name = "conv" + std::to_string(s + 2);
    for (int b = 0; b < stage.blocks; ++b) {
      const auto base = stage_name + "_block" + std::to_string(b + 1);
      const int stride = b == 0 ? stage.stride : 1;
      Bottleneck block;
      block.conv1 = make_layer(base + "_1", in, stage.mid_channels, 1, stride, 0);
      block.conv2 = make_layer(base + "_2", stage.mid_channels, stage.mid_channels, 3, 1, 1);
      block.conv3 = make_layer(base + "_3", stage.mid_channels, stage.out_channels, 1, 1, 0);
      if (b == 0) block.projection = make_layer(base + "_0", in, stage.out_channels, 1, stride, 0);
      model.blocks.push_back(std::move(block));
      in = stage.out_channels;
    }
  }
  if (init == WeightInit::HeNormal) {
    Rng rng(derive_seed(seed, "model.init"));
    he_normal(model.stem, rng);
    for (auto& b : model.blocks) {
      he_normal(b.conv1, rng);
      he_normal(b.conv2, rng);
      he_normal(b.conv3, rng);
      if (b.projection) he_normal(*b.projection, rng);
    }
  }
  return model;
}

ForwardResult forward_with_taps(const ModelSpec& model, const Tensor& input, const std::set<int>& taps,
                                TapMode mode) {
  check_input(model, input.shape());
  const int total = model.tap_count();
  for (int t : taps) {
    if (t < 1 || t > total) {
      throw TapError("tap " + std::to_string(t) + " outside [1, " + std::to_string(total) + "]");
    }
  }

  ForwardResult result;
  TapRecorder rec(taps, mode, result.taps);
  Tensor x = rec.conv_bn(model.stem, input, true, true);
  x = maxpool(x, model.pool_kernel, model.pool_stride, model.pool_padding);

  for (const auto& block : model.blocks) {
    Tensor y = rec.conv_bn(block.conv1, x, true, true);
    y = rec.conv_bn(block.conv2, y, true, true);
    y = rec.conv_bn(block.conv3, y, false, false);
    const int conv3_tap = rec.counter();
    if (block.projection) {
      Tensor shortcut = rec.conv_bn(*block.projection, x, false, true);
      x = std::move(shortcut);
    }
    if (x.shape() != y.shape()) {
      throw ShapeError("residual mismatch in " + block.conv3.name + ": " + to_string(x.shape()) + " vs " +
                       to_string(y.shape()));
    }
    auto xs = x.values();
    auto ys = y.values();
    for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = std::max(ys[i] + xs[i], 0.0f);
    rec.record_post(conv3_tap, y);
    x = std::move(y);
  }
  result.pooled = global_avg_pool(x);
  return result;
}

std::vector<Shape> tap_shapes(const ModelSpec& model, int height, int width) {
  check_input(model, Shape{model.stem.conv.in_channels, height, width});
  std::vector<Shape> shapes;
  const auto after = [](const ConvSpec& c, int h, int w) {
    return Shape{c.out_channels, conv_output_size(h, c.kernel_h, c.stride_h, c.pad_h),
                 conv_output_size(w, c.kernel_w, c.stride_w, c.pad_w)};
  };
  Shape s = after(model.stem.conv, height, width);
  shapes.push_back(s);
  s.height = conv_output_size(s.height, model.pool_kernel, model.pool_stride, model.pool_padding);
  s.width = conv_output_size(s.width, model.pool_kernel, model.pool_stride, model.pool_padding);
  for (const auto& b : model.blocks) {
    const Shape s1 = after(b.conv1.conv, s.height, s.width);
    const Shape s2 = after(b.conv2.conv, s1.height, s1.width);
    const Shape s3 = after(b.conv3.conv, s2.height, s2.width);
    shapes.insert(shapes.end(), {s1, s2, s3});
    if (b.projection) shapes.push_back(after(b.projection->conv, s.height, s.width));
    s = s3;
  }
  return shapes;
}

std::string tap_table_csv(const ModelSpec& model) {
  std::string csv = "tap_index,layer_name\n";
  const auto names = model.tap_names();
  for (std::size_t i = 0; i < names.size(); ++i) csv += std::to_string(i + 1) + "," + names[i] + "\n";
  return csv;
}

}  // namespace irisfeat
