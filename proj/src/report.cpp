#include "irisfeat/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "irisfeat/errors.hpp"
#include "json.hpp"

namespace irisfeat {

namespace {

using nlohmann::json;

constexpr const char* kSchema = "irisfeat.report/1";

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string boxplot_header() { return "configuration,min,q1,median,q3,max\n"; }

std::string boxplot_row(const std::string& name, const FiveNumberSummary& s) {
  return name + "," + num(s.min) + "," + num(s.q1) + "," + num(s.median) + "," + num(s.q3) + "," + num(s.max) + "\n";
}

json summary_json(const FiveNumberSummary& s) {
  return {{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"q3", s.q3}, {"max", s.max}};
}

}  // namespace

std::string report_to_json_text(const EvalReport& r) {
  json j;
  j["schema"] = kSchema;
  j["label"] = r.label;
  j["preset"] = r.preset;
  j["seed"] = r.seed;
  j["train_count"] = r.train_count;
  j["test_count"] = r.test_count;
  j["class_count"] = r.class_count;
  j["taps"] = json::array();
  for (const auto& t : r.taps) {
    j["taps"].push_back({{"tap", t.tap},
                         {"layer_name", t.layer_name},
                         {"feature_len", t.feature_len},
                         {"pca_dims", t.pca_dims},
                         {"accuracy", t.accuracy}});
  }
  j["best_tap"] = r.best_tap;
  j["fmr_target"] = r.fmr_target;
  j["tpr_at_fmr"] = r.tpr_at_fmr;
  if (r.roc) {
    json points = json::array();
    for (const auto& p : r.roc->points) {
      points.push_back({std::isinf(p.threshold) ? json(nullptr) : json(p.threshold), p.fmr, p.tpr});
    }
    j["roc"] = {{"genuine_count", r.roc->genuine_count},
                {"impostor_count", r.roc->impostor_count},
                {"points", std::move(points)}};
  } else {
    j["roc"] = nullptr;
  }
  if (r.subsplit) {
    j["subsplit"] = {{"accuracies", r.subsplit->accuracies}, {"summary", summary_json(r.subsplit->summary)}};
  } else {
    j["subsplit"] = nullptr;
  }
  return j.dump(2) + "\n";
}

EvalReport report_from_json_text(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("schema").get<std::string>() != kSchema) throw FormatError("unknown report schema");
    EvalReport r;
    r.label = j.at("label").get<std::string>();
    r.preset = j.at("preset").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.train_count = j.at("train_count").get<int>();
    r.test_count = j.at("test_count").get<int>();
    r.class_count = j.at("class_count").get<int>();
    for (const auto& t : j.at("taps")) {
      r.taps.push_back({t.at("tap").get<int>(), t.at("layer_name").get<std::string>(), t.at("feature_len").get<int>(),
                        t.at("pca_dims").get<int>(), t.at("accuracy").get<double>()});
    }
    r.best_tap = j.at("best_tap").get<int>();
    r.fmr_target = j.at("fmr_target").get<double>();
    r.tpr_at_fmr = j.at("tpr_at_fmr").get<double>();
    if (!j.at("roc").is_null()) {
      const auto& roc = j.at("roc");
      RocCurve curve;
      curve.genuine_count = roc.at("genuine_count").get<std::size_t>();
      curve.impostor_count = roc.at("impostor_count").get<std::size_t>();
      for (const auto& p : roc.at("points")) {
        const double threshold =
            p.at(0).is_null() ? std::numeric_limits<double>::infinity() : p.at(0).get<double>();
        curve.points.push_back({threshold, p.at(1).get<double>(), p.at(2).get<double>()});
      }
      r.roc = std::move(curve);
    }
    if (!j.at("subsplit").is_null()) {
      const auto& s = j.at("subsplit");
      SubsplitResult sub;
      sub.accuracies = s.at("accuracies").get<std::vector<double>>();
      const auto& q = s.at("summary");
      sub.summary = {q.at("min").get<double>(), q.at("q1").get<double>(), q.at("median").get<double>(),
                     q.at("q3").get<double>(), q.at("max").get<double>()};
      r.subsplit = std::move(sub);
    }
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed report JSON: ") + e.what());
  }
}

EvalReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open report " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return report_from_json_text(text.str());
  } catch (const Error& e) {
    rethrow_with_context(e, path.string());
  }
}

std::string layers_csv(const EvalReport& report) {
  std::string csv = "tap,layer_name,feature_len,pca_dims,accuracy\n";
  for (const auto& t : report.taps) {
    csv += std::to_string(t.tap) + "," + t.layer_name + "," + std::to_string(t.feature_len) + "," +
           std::to_string(t.pca_dims) + "," + num(t.accuracy) + "\n";
  }
  return csv;
}

std::string roc_csv(const RocCurve& curve) {
  std::string csv = "fmr,tpr\n";
  for (const auto& p : curve.points) csv += num(p.fmr) + "," + num(p.tpr) + "\n";
  return csv;
}

std::vector<std::filesystem::path> emit(const EvalReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  const auto put = [&](const std::string& name, const std::string& text) {
    written.push_back(out_dir / name);
    write_text(written.back(), text);
  };
  put("layers.csv", layers_csv(report));
  if (report.roc) put("roc_" + std::to_string(report.best_tap) + ".csv", roc_csv(*report.roc));
  std::string box = boxplot_header();
  if (report.subsplit) box += boxplot_row(report.label, report.subsplit->summary);
  put("boxplot.csv", box);
  put("report.json", report_to_json_text(report));
  return written;
}

PlotBundle make_bundle(const std::vector<EvalReport>& reports) {
  PlotBundle bundle;
  for (const auto& r : reports) {
    bundle.layer_curve.push_back({r.label, r.taps});
    if (r.roc) bundle.roc_series.push_back({r.label, r.best_tap, r.roc->points});
    if (r.subsplit) bundle.boxplot_stats.push_back({r.label, r.subsplit->summary, r.subsplit->accuracies});
  }
  return bundle;
}

std::vector<std::filesystem::path> emit_bundle(const PlotBundle& bundle, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::string layers = "configuration,tap,layer_name,accuracy\n";
  for (const auto& series : bundle.layer_curve) {
    for (const auto& t : series.points) {
      layers += series.name + "," + std::to_string(t.tap) + "," + t.layer_name + "," + num(t.accuracy) + "\n";
    }
  }
  std::string roc = "configuration,tap,fmr,tpr\n";
  for (const auto& series : bundle.roc_series) {
    for (const auto& p : series.points) {
      roc += series.name + "," + std::to_string(series.tap) + "," + num(p.fmr) + "," + num(p.tpr) + "\n";
    }
  }
  std::string box = boxplot_header();
  for (const auto& b : bundle.boxplot_stats) box += boxplot_row(b.name, b.summary);

  std::vector<std::filesystem::path> written{out_dir / "layer_curve.csv", out_dir / "roc_series.csv",
                                             out_dir / "boxplot.csv"};
  write_text(written[0], layers);
  write_text(written[1], roc);
  write_text(written[2], box);
  return written;
}

}  // namespace irisfeat
