#include "irisfeat/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "irisfeat/errors.hpp"
#include "json.hpp"

namespace irisfeat {

namespace {

using nlohmann::json;

void only_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void take(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

const char* init_name(WeightInit w) { return w == WeightInit::Zero ? "zero" : "random"; }
const char* mode_name(TapMode m) { return m == TapMode::PreActivation ? "pre" : "post"; }
const char* scaler_name(ScalerFit f) { return f == ScalerFit::TrainOnly ? "train" : "all"; }
const char* basis_name(VarianceBasis b) { return b == VarianceBasis::Total ? "total" : "captured"; }
const char* loss_name(HingeLoss l) { return l == HingeLoss::L1 ? "l1" : "squared"; }

template <class E>
E pick(const std::string& value, std::initializer_list<std::pair<const char*, E>> options, const std::string& key) {
  std::string names;
  for (const auto& [name, e] : options) {
    if (value == name) return e;
    names += names.empty() ? name : std::string("|") + name;
  }
  throw ConfigError(key + " must be one of " + names + ", got '" + value + "'");
}

void in_open_unit(double v, const std::string& key) {
  if (!(v > 0.0 && v < 1.0)) throw ConfigError(key + " must lie in (0,1)");
}

void positive(long long v, const std::string& key) {
  if (v <= 0) throw ConfigError(key + " must be positive");
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
  const auto& a = sweep;
  const auto& b = o.sweep;
  const bool sweep_eq = a.seed == b.seed && a.scaler_fit == b.scaler_fit && a.pca.cap == b.pca.cap &&
                        a.pca.variance_target == b.pca.variance_target && a.pca.oversample == b.pca.oversample &&
                        a.pca.power_iters == b.pca.power_iters && a.pca.basis == b.pca.basis && a.svm.C == b.svm.C &&
                        a.svm.tol == b.svm.tol && a.svm.max_iter == b.svm.max_iter && a.svm.loss == b.svm.loss &&
                        a.subsplits == b.subsplits && a.subsplit_keep == b.subsplit_keep &&
                        a.fmr_target == b.fmr_target && a.tap_mode == b.tap_mode && a.threads == b.threads &&
                        a.tap_batch == b.tap_batch;
  const auto& s = synth;
  const auto& t = o.synth;
  const bool synth_eq = s.n_classes == t.n_classes && s.samples_per_class == t.samples_per_class &&
                        s.image_size == t.image_size && s.seed == t.seed && s.rotation_jitter == t.rotation_jitter &&
                        s.dilation_jitter == t.dilation_jitter && s.noise_sigma == t.noise_sigma &&
                        s.image_format == t.image_format;
  return manifest == o.manifest && preset == o.preset && weights == o.weights && init == o.init && taps == o.taps &&
         split_fraction == o.split_fraction && seed == o.seed && label == o.label && out == o.out && sweep_eq &&
         synth_eq;
}

std::optional<std::vector<int>> parse_taps(std::string_view text) {
  if (text == "all") return std::nullopt;
  if (text.empty()) throw ConfigError("empty tap list (expected all or a list like 1,4,10-12)");
  std::vector<int> taps;
  const auto number = [&](std::string_view s) {
    int v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
      throw ConfigError("bad tap '" + std::string(s) + "' (expected all or a list like 1,4,10-12)");
    }
    return v;
  };
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      taps.push_back(number(item));
    } else {
      const int lo = number(item.substr(0, dash));
      const int hi = number(item.substr(dash + 1));
      if (hi < lo) throw ConfigError("empty tap range '" + std::string(item) + "'");
      for (int t = lo; t <= hi; ++t) taps.push_back(t);
    }
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
  }
  return taps;
}

std::set<int> resolve_taps(const RunConfig& config, const ModelSpec& model) {
  std::set<int> taps;
  if (!config.taps) {
    for (int t = 1; t <= model.tap_count(); ++t) taps.insert(t);
    return taps;
  }
  for (int t : *config.taps) {
    if (t < 1 || t > model.tap_count()) {
      throw TapError("tap " + std::to_string(t) + " outside 1.." + std::to_string(model.tap_count()) + " for preset " +
                     model.preset);
    }
    taps.insert(t);
  }
  return taps;
}

void sync_seeds(RunConfig& config) {
  config.sweep.seed = config.seed;
  config.synth.seed = config.seed;
}

RunConfig config_from_json_text(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(j,
            {"manifest", "preset", "weights", "init", "taps", "tap_mode", "split_fraction", "seed", "label",
             "scaler_fit", "pca", "svm", "subsplits", "subsplit_keep", "fmr_target", "out", "threads", "tap_batch",
             "synth"},
            "config");
  RunConfig c;
  const std::string top = "config";
  std::string s;
  if (j.contains("manifest")) {
    take(j, "manifest", s, top);
    c.manifest = resolve(base_dir, s);
  }
  if (j.contains("weights")) {
    s.clear();
    take(j, "weights", s, top);
    c.weights = resolve(base_dir, s);
  }
  if (j.contains("out")) {
    take(j, "out", s, top);
    c.out = resolve(base_dir, s);
  }
  take(j, "preset", c.preset, top);
  take(j, "label", c.label, top);
  take(j, "split_fraction", c.split_fraction, top);
  take(j, "seed", c.seed, top);
  if (j.contains("init")) {
    take(j, "init", s, top);
    c.init = pick<WeightInit>(s, {{"random", WeightInit::HeNormal}, {"zero", WeightInit::Zero}}, "init");
  }
  if (j.contains("taps")) {
    const auto& t = j.at("taps");
    if (t.is_string()) {
      c.taps = parse_taps(t.get<std::string>());
    } else if (t.is_array()) {
      take(j, "taps", c.taps.emplace(), top);
    } else {
      throw ConfigError("config.taps must be \"all\" or an array of tap indices");
    }
  }
  if (j.contains("tap_mode")) {
    take(j, "tap_mode", s, top);
    c.sweep.tap_mode = pick<TapMode>(s, {{"pre", TapMode::PreActivation}, {"post", TapMode::PostActivation}}, "tap_mode");
  }
  if (j.contains("scaler_fit")) {
    take(j, "scaler_fit", s, top);
    c.sweep.scaler_fit = pick<ScalerFit>(s, {{"train", ScalerFit::TrainOnly}, {"all", ScalerFit::AllRows}}, "scaler_fit");
  }
  take(j, "subsplits", c.sweep.subsplits, top);
  take(j, "subsplit_keep", c.sweep.subsplit_keep, top);
  take(j, "fmr_target", c.sweep.fmr_target, top);
  take(j, "threads", c.sweep.threads, top);
  take(j, "tap_batch", c.sweep.tap_batch, top);

  if (j.contains("pca")) {
    const auto& p = j.at("pca");
    only_keys(p, {"cap", "variance_target", "oversample", "power_iters", "basis"}, "config.pca");
    take(p, "cap", c.sweep.pca.cap, "config.pca");
    take(p, "variance_target", c.sweep.pca.variance_target, "config.pca");
    take(p, "oversample", c.sweep.pca.oversample, "config.pca");
    take(p, "power_iters", c.sweep.pca.power_iters, "config.pca");
    if (p.contains("basis")) {
      take(p, "basis", s, "config.pca");
      c.sweep.pca.basis =
          pick<VarianceBasis>(s, {{"total", VarianceBasis::Total}, {"captured", VarianceBasis::Captured}}, "pca.basis");
    }
  }
  if (j.contains("svm")) {
    const auto& v = j.at("svm");
    only_keys(v, {"C", "tol", "max_iter", "loss"}, "config.svm");
    take(v, "C", c.sweep.svm.C, "config.svm");
    take(v, "tol", c.sweep.svm.tol, "config.svm");
    take(v, "max_iter", c.sweep.svm.max_iter, "config.svm");
    if (v.contains("loss")) {
      take(v, "loss", s, "config.svm");
      c.sweep.svm.loss = pick<HingeLoss>(s, {{"l1", HingeLoss::L1}, {"squared", HingeLoss::Squared}}, "svm.loss");
    }
  }
  if (j.contains("synth")) {
    const auto& y = j.at("synth");
    only_keys(y,
              {"n_classes", "samples_per_class", "image_size", "rotation_jitter", "dilation_jitter", "noise_sigma",
               "image_format"},
              "config.synth");
    take(y, "n_classes", c.synth.n_classes, "config.synth");
    take(y, "samples_per_class", c.synth.samples_per_class, "config.synth");
    take(y, "image_size", c.synth.image_size, "config.synth");
    take(y, "rotation_jitter", c.synth.rotation_jitter, "config.synth");
    take(y, "dilation_jitter", c.synth.dilation_jitter, "config.synth");
    take(y, "noise_sigma", c.synth.noise_sigma, "config.synth");
    take(y, "image_format", c.synth.image_format, "config.synth");
  }
  sync_seeds(c);
  return c;
}

RunConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return config_from_json_text(text.str(), path.parent_path());
  } catch (const Error& e) {
    rethrow_with_context(e, path.string());
  }
}

std::string config_to_json_text(const RunConfig& c) {
  json j;
  j["manifest"] = c.manifest.string();
  j["preset"] = c.preset;
  j["weights"] = c.weights.string();
  j["init"] = init_name(c.init);
  if (c.taps) {
    j["taps"] = *c.taps;
  } else {
    j["taps"] = "all";
  }
  j["tap_mode"] = mode_name(c.sweep.tap_mode);
  j["split_fraction"] = c.split_fraction;
  j["seed"] = c.seed;
  j["label"] = c.label;
  j["scaler_fit"] = scaler_name(c.sweep.scaler_fit);
  j["pca"] = {{"cap", c.sweep.pca.cap},
              {"variance_target", c.sweep.pca.variance_target},
              {"oversample", c.sweep.pca.oversample},
              {"power_iters", c.sweep.pca.power_iters},
              {"basis", basis_name(c.sweep.pca.basis)}};
  j["svm"] = {{"C", c.sweep.svm.C},
              {"tol", c.sweep.svm.tol},
              {"max_iter", c.sweep.svm.max_iter},
              {"loss", loss_name(c.sweep.svm.loss)}};
  j["subsplits"] = c.sweep.subsplits;
  j["subsplit_keep"] = c.sweep.subsplit_keep;
  j["fmr_target"] = c.sweep.fmr_target;
  j["out"] = c.out.string();
  j["threads"] = c.sweep.threads;
  j["tap_batch"] = c.sweep.tap_batch;
  j["synth"] = {{"n_classes", c.synth.n_classes},
                {"samples_per_class", c.synth.samples_per_class},
                {"image_size", c.synth.image_size},
                {"rotation_jitter", c.synth.rotation_jitter},
                {"dilation_jitter", c.synth.dilation_jitter},
                {"noise_sigma", c.synth.noise_sigma},
                {"image_format", c.synth.image_format}};
  return j.dump(2) + "\n";
}

void validate(const RunConfig& c, bool needs_manifest) {
  plan_for(c.preset);
  in_open_unit(c.split_fraction, "split_fraction");
  in_open_unit(c.sweep.subsplit_keep, "subsplit_keep");
  in_open_unit(c.sweep.fmr_target, "fmr_target");
  in_open_unit(c.sweep.pca.variance_target, "pca.variance_target");
  positive(c.sweep.pca.cap, "pca.cap");
  if (c.sweep.pca.oversample < 0) throw ConfigError("pca.oversample must be >= 0");
  if (c.sweep.pca.power_iters < 0) throw ConfigError("pca.power_iters must be >= 0");
  if (!(c.sweep.svm.C > 0.0)) throw ConfigError("svm.C must be positive");
  if (!(c.sweep.svm.tol > 0.0)) throw ConfigError("svm.tol must be positive");
  positive(c.sweep.svm.max_iter, "svm.max_iter");
  positive(c.sweep.subsplits, "subsplits");
  positive(c.sweep.threads, "threads");
  if (c.sweep.tap_batch < 0) throw ConfigError("tap_batch must be >= 0");
  if (c.taps && c.taps->empty()) throw ConfigError("taps list is empty");
  validate(c.synth);
  if (needs_manifest) {
    if (c.manifest.empty()) throw ConfigError("manifest is not set (config key \"manifest\")");
    if (!std::filesystem::is_regular_file(c.manifest)) {
      throw ConfigError("manifest " + c.manifest.string() + " does not exist");
    }
  }
  if (!c.weights.empty() && !std::filesystem::is_regular_file(c.weights)) {
    throw ConfigError("weights file " + c.weights.string() + " does not exist");
  }
}

}  // namespace irisfeat
