#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "irisfeat/sweep.hpp"

namespace irisfeat {

// report.json, see docs/report.schema.json. Doubles are written with
// round-trip precision, so parsing the text gives back an equal EvalReport.
std::string report_to_json_text(const EvalReport& report);
EvalReport report_from_json_text(std::string_view text);
EvalReport read_report(const std::filesystem::path& path);

/// `tap,layer_name,feature_len,pca_dims,accuracy`
std::string layers_csv(const EvalReport& report);
/// `fmr,tpr`, one row per curve point.
std::string roc_csv(const RocCurve& curve);

/// Writes layers.csv, roc_<best tap>.csv (when a ROC exists), boxplot.csv and
/// report.json into out_dir. Returns the paths written, in that order.
std::vector<std::filesystem::path> emit(const EvalReport& report, const std::filesystem::path& out_dir);

// Plot-ready series across one or more configurations.
struct LayerSeries {
  std::string name;
  std::vector<TapResult> points;
};

struct RocSeries {
  std::string name;
  int tap = 0;
  std::vector<RocPoint> points;
};

struct BoxplotStats {
  std::string name;
  FiveNumberSummary summary;
  std::vector<double> accuracies;
};

struct PlotBundle {
  std::vector<LayerSeries> layer_curve;
  std::vector<RocSeries> roc_series;
  std::vector<BoxplotStats> boxplot_stats;
};

PlotBundle make_bundle(const std::vector<EvalReport>& reports);

/// Writes layer_curve.csv, roc_series.csv and boxplot.csv.
std::vector<std::filesystem::path> emit_bundle(const PlotBundle& bundle, const std::filesystem::path& out_dir);

}  // namespace irisfeat
