// irisfeat: command-line front end for the layer-wise iris pipeline.
//
//   irisfeat synth     --config c.json --out data/
//   irisfeat normalize --manifest data/manifest.csv --out norm/
//   irisfeat extract   --manifest data/manifest.csv --taps 1-8 --out feats/
//   irisfeat sweep     --config c.json --out run/
//   irisfeat roc       --report run/report.json --fmr 0.01
//   irisfeat report    run_a/report.json run_b/report.json --out plots/

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "irisfeat/config.hpp"
#include "irisfeat/container.hpp"
#include "irisfeat/errors.hpp"
#include "irisfeat/eval.hpp"
#include "irisfeat/features.hpp"
#include "irisfeat/manifest.hpp"
#include "irisfeat/model.hpp"
#include "irisfeat/normalize.hpp"
#include "irisfeat/report.hpp"
#include "irisfeat/sweep.hpp"
#include "irisfeat/synthgen.hpp"
#include "irisfeat/weights.hpp"

namespace fs = std::filesystem;
using namespace irisfeat;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::optional<std::string> taps;
  std::optional<std::string> preset;
  std::optional<std::string> weights;
  std::optional<std::string> manifest;
  std::optional<std::string> init;
  std::optional<std::string> label;
  std::optional<int> tap_batch;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--seed", o.seed, "Top-level seed; every other seed derives from it");
  cmd->add_option("--threads", o.threads, "Worker threads (1 is bitwise deterministic)");
  cmd->add_option("--out", o.out, "Output directory");
}

void add_model(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--manifest", o.manifest, "Dataset manifest CSV");
  cmd->add_option("--taps", o.taps, "all, or a list like 1,4,10-12");
  cmd->add_option("--preset", o.preset, "Architecture preset (resnet50 or mini)");
  cmd->add_option("--weights", o.weights, "LPWT weight file; omit to use --init");
  cmd->add_option("--init", o.init, "Weights when no file is given (random or zero)");
  cmd->add_option("--label", o.label, "Configuration name recorded in the report");
  cmd->add_option("--tap-batch", o.tap_batch, "Taps per forward pass during sweep (0 = all)");
}

RunConfig load(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : read_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.threads) c.sweep.threads = *o.threads;
  if (o.out) c.out = *o.out;
  if (o.taps) c.taps = parse_taps(*o.taps);
  if (o.preset) c.preset = *o.preset;
  if (o.weights) c.weights = *o.weights;
  if (o.manifest) c.manifest = *o.manifest;
  if (o.label) c.label = *o.label;
  if (o.tap_batch) c.sweep.tap_batch = *o.tap_batch;
  if (o.init) {
    if (*o.init == "random") {
      c.init = WeightInit::HeNormal;
    } else if (*o.init == "zero") {
      c.init = WeightInit::Zero;
    } else {
      throw ConfigError("--init must be random or zero");
    }
  }
  sync_seeds(c);
  return c;
}

ModelSpec make_model(const RunConfig& c) {
  return c.weights.empty() ? build_model(c.preset, c.init, c.seed) : load_weights(c.weights, c.preset);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

std::string tap_file(int tap) {
  char name[32];
  std::snprintf(name, sizeof name, "tap_%02d.lpfm", tap);
  return name;
}

void run_synth(const Overrides& o) {
  auto c = load(o);
  validate(c, false);
  const auto manifest = generate(c.synth, c.out);
  std::cout << manifest.string() << "\n";
}

void run_normalize(const Overrides& o) {
  auto c = load(o);
  validate(c, true);
  const auto dataset = load_dataset(c.manifest);
  ensure_dir(c.out);
  std::string index = "filename,class_id,tensor\n";
  for (std::size_t i = 0; i < dataset.entries.size(); ++i) {
    const auto& e = dataset.entries[i];
    NormalizedIris iris;
    try {
      iris = rubber_sheet(dataset.images[i], e.circles);
    } catch (const Error& err) {
      rethrow_with_context(err, e.filename);
    }
    Container box;
    box.add("iris", {static_cast<std::uint32_t>(iris.rows), static_cast<std::uint32_t>(iris.cols)}, iris.values);
    const auto name = fs::path(e.filename).stem().string() + ".lpwt";
    write_container(c.out / name, box);
    index += e.filename + "," + std::to_string(e.class_id) + "," + name + "\n";
  }
  write_text(c.out / "normalized.csv", index);
  std::cout << dataset.entries.size() << " images normalized into " << c.out.string() << "\n";
}

void run_extract(const Overrides& o) {
  auto c = load(o);
  validate(c, true);
  const auto model = make_model(c);
  const auto taps = resolve_taps(c, model);
  const auto data = prepare_inputs(load_dataset(c.manifest), c.sweep.threads);
  ensure_dir(c.out);
  write_text(c.out / "tap_table.csv", tap_table_csv(model));
  const auto features = extract_features(model, data, taps, c.sweep.tap_mode, c.sweep.threads);
  for (const auto& f : features) write_features(c.out / tap_file(f.tap), f);
  std::cout << features.size() << " tap matrices written to " << c.out.string() << "\n";
}

void run_sweep(const Overrides& o) {
  auto c = load(o);
  validate(c, true);
  const auto model = make_model(c);
  const auto taps = resolve_taps(c, model);
  const auto dataset = load_dataset(c.manifest);
  const auto data = prepare_inputs(dataset, c.sweep.threads);
  const auto plan = stratified_split(data.labels, c.split_fraction, split_seed(c.seed));
  auto report = layer_sweep(model, data, plan, taps, c.sweep);
  if (!c.label.empty()) report.label = c.label;
  for (const auto& path : emit(report, c.out)) std::cout << path.string() << "\n";
  for (const auto& t : report.taps) {
    if (t.tap == report.best_tap) {
      std::cout << "best tap " << t.tap << " (" << t.layer_name << ") accuracy " << t.accuracy << " tpr@fmr "
                << report.tpr_at_fmr << "\n";
    }
  }
}

void run_roc(const std::string& report_path, double fmr, const std::optional<std::string>& out) {
  if (!(fmr > 0.0 && fmr < 1.0)) throw ConfigError("--fmr must lie in (0,1)");
  const auto report = read_report(report_path);
  if (!report.roc) throw DegenerateScoresError("report has no ROC (no taps were evaluated)");
  const double tpr = tpr_at_fmr(*report.roc, fmr);
  if (out) {
    ensure_dir(*out);
    write_text(fs::path(*out) / ("roc_" + std::to_string(report.best_tap) + ".csv"), roc_csv(*report.roc));
  }
  std::cout << "tap " << report.best_tap << " tpr " << tpr << " at fmr " << fmr << "\n";
}

void run_report(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<EvalReport> reports;
  for (const auto& p : inputs) reports.push_back(read_report(p));
  for (const auto& path : emit_bundle(make_bundle(reports), out)) std::cout << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layer-wise deep-feature iris recognition"};
  app.require_subcommand(1);

  Overrides synth_o, norm_o, extract_o, sweep_o;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic iris dataset");
  add_common(synth, synth_o);

  auto* normalize = app.add_subcommand("normalize", "Rubber-sheet every manifest image to 64x512");
  add_common(normalize, norm_o);
  normalize->add_option("--manifest", norm_o.manifest, "Dataset manifest CSV");

  auto* extract = app.add_subcommand("extract", "Write per-tap feature matrices");
  add_common(extract, extract_o);
  add_model(extract, extract_o);

  auto* sweep = app.add_subcommand("sweep", "Full per-layer evaluation");
  add_common(sweep, sweep_o);
  add_model(sweep, sweep_o);

  std::string report_path = "out/report.json";
  double fmr = 0.001;
  std::optional<std::string> roc_out;
  auto* roc = app.add_subcommand("roc", "TPR at a target FMR from a sweep report");
  roc->add_option("--report", report_path, "report.json written by sweep");
  roc->add_option("--fmr", fmr, "Target false match rate");
  roc->add_option("--out", roc_out, "Also write the ROC CSV here");

  std::vector<std::string> report_inputs;
  std::string report_out = "plots";
  auto* report = app.add_subcommand("report", "Plot-ready series from one or more reports");
  report->add_option("reports", report_inputs, "report.json files")->required();
  report->add_option("--out", report_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  const std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (*synth) run_synth(synth_o);
    if (*normalize) run_normalize(norm_o);
    if (*extract) run_extract(extract_o);
    if (*sweep) run_sweep(sweep_o);
    if (*roc) run_roc(report_path, fmr, roc_out);
    if (*report) run_report(report_inputs, report_out);
  } catch (const std::exception& e) {
    std::cerr << "irisfeat " << stage << " failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
