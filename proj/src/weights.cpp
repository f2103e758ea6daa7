#include "irisfeat/weights.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "irisfeat/errors.hpp"

namespace irisfeat {

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

void append_layer(Container& c, const ConvLayer& layer) {
  const auto& conv = layer.conv;
  c.add(layer.name + ".weight",
        {static_cast<std::uint32_t>(conv.out_channels), static_cast<std::uint32_t>(conv.in_channels),
         static_cast<std::uint32_t>(conv.kernel_h), static_cast<std::uint32_t>(conv.kernel_w)},
        conv.weights);
  if (!conv.bias.empty()) c.add(layer.name + ".bias", {static_cast<std::uint32_t>(conv.out_channels)}, conv.bias);
  const auto ch = static_cast<std::uint32_t>(layer.bn.channels());
  c.add(layer.bn_name + ".gamma", {ch}, layer.bn.gamma);
  c.add(layer.bn_name + ".beta", {ch}, layer.bn.beta);
  c.add(layer.bn_name + ".mean", {ch}, layer.bn.mean);
  c.add(layer.bn_name + ".variance", {ch}, layer.bn.variance);
  c.add_scalar(layer.bn_name + ".epsilon", layer.bn.epsilon);
}

class EntryPicker {
 public:
  explicit EntryPicker(const Container& c) {
    for (const auto& e : c.entries) by_name_.emplace(e.name, &e);
  }

  const ContainerEntry* take(const std::string& name, const std::vector<std::uint32_t>& dims, bool optional = false) {
    const auto it = by_name_.find(name);
    if (it == by_name_.end()) {
      if (!optional) missing_.push_back(name);
      return nullptr;
    }
    used_.insert(name);
    if (it->second->dims != dims) {
      std::string want, got;
      for (auto d : dims) want += std::to_string(d) + " ";
      for (auto d : it->second->dims) got += std::to_string(d) + " ";
      throw ShapeError("entry '" + name + "' has dims [ " + got + "], expected [ " + want + "]");
    }
    return it->second;
  }

  void fill(const std::string& name, std::vector<float>& target) {
    if (const auto* e = take(name, {static_cast<std::uint32_t>(target.size())})) target = e->values;
  }

  void finish() const {
    std::vector<std::string> extra;
    for (const auto& [name, entry] : by_name_) {
      if (!used_.contains(name)) extra.push_back(name);
    }
    std::sort(extra.begin(), extra.end());
    std::string msg;
    if (!missing_.empty()) msg += "missing entries: " + join(missing_);
    if (!extra.empty()) msg += std::string(msg.empty() ? "" : "; ") + "unexpected entries: " + join(extra);
    if (!msg.empty()) throw CompletenessError(msg);
  }

 private:
  std::unordered_map<std::string, const ContainerEntry*> by_name_;
  std::set<std::string> used_;
  std::vector<std::string> missing_;
};

void load_layer(EntryPicker& picker, ConvLayer& layer) {
  auto& conv = layer.conv;
  if (const auto* w = picker.take(layer.name + ".weight",
                                  {static_cast<std::uint32_t>(conv.out_channels),
                                   static_cast<std::uint32_t>(conv.in_channels),
                                   static_cast<std::uint32_t>(conv.kernel_h),
                                   static_cast<std::uint32_t>(conv.kernel_w)})) {
    conv.weights = w->values;
  }
  if (const auto* b = picker.take(layer.name + ".bias", {static_cast<std::uint32_t>(conv.out_channels)}, true)) {
    conv.bias = b->values;
  }
  picker.fill(layer.bn_name + ".gamma", layer.bn.gamma);
  picker.fill(layer.bn_name + ".beta", layer.bn.beta);
  picker.fill(layer.bn_name + ".mean", layer.bn.mean);
  picker.fill(layer.bn_name + ".variance", layer.bn.variance);
  if (const auto* eps = picker.take(layer.bn_name + ".epsilon", {})) layer.bn.epsilon = eps->values[0];
}

}  // namespace

Container model_to_container(const ModelSpec& model) {
  Container canonical;
  for (const auto* layer : model.conv_layers()) append_layer(canonical, *layer);
  if (model.entry_order.empty() || model.entry_order.size() != canonical.entries.size()) return canonical;

  // Reproduce the source file's entry order when it names the same set.
  Container ordered;
  for (const auto& name : model.entry_order) {
    const auto* e = canonical.find(name);
    if (!e) return canonical;
    ordered.entries.push_back(*e);
  }
  return ordered;
}

ModelSpec model_from_container(const Container& container, const std::string& preset) {
  ModelSpec model = build_model(preset, WeightInit::Zero);
  EntryPicker picker(container);
  load_layer(picker, model.stem);
  for (auto& b : model.blocks) {
    load_layer(picker, b.conv1);
    load_layer(picker, b.conv2);
    load_layer(picker, b.conv3);
    if (b.projection) load_layer(picker, *b.projection);
  }
  picker.finish();
  for (const auto* layer : model.conv_layers()) {
    layer->conv.validate();
    layer->bn.validate();
  }
  for (const auto& e : container.entries) model.entry_order.push_back(e.name);
  return model;
}

ModelSpec load_weights(const std::filesystem::path& path, const std::string& preset) {
  const auto container = read_container(path);
  try {
    return model_from_container(container, preset);
  } catch (const Error& e) {
    rethrow_with_context(e, path.string());
  }
}

void save_weights(const std::filesystem::path& path, const ModelSpec& model) {
  write_container(path, model_to_container(model));
}

}  // namespace irisfeat
