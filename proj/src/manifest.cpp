#include "irisfeat/manifest.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "irisfeat/errors.hpp"

namespace irisfeat {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw FormatError(where + ": not a number: '" + text + "'");
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty manifest");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kManifestHeader) throw FormatError(path.string() + ": unexpected header '" + line + "'");

  std::vector<ManifestEntry> entries;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = path.string() + ":" + std::to_string(line_no);
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw FormatError(where + ": expected 8 fields, got " + std::to_string(f.size()));
    ManifestEntry e;
    e.filename = f[0];
    std::uint32_t cls = 0;
    const auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), cls);
    if (ec != std::errc() || ptr != f[1].data() + f[1].size()) {
      throw FormatError(where + ": bad class_id '" + f[1] + "'");
    }
    e.class_id = cls;
    e.circles = {parse_double(f[2], where), parse_double(f[3], where), parse_double(f[4], where),
                 parse_double(f[5], where), parse_double(f[6], where), parse_double(f[7], where)};
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << kManifestHeader << '\n';
  for (const auto& e : entries) {
    const auto& c = e.circles;
    out << e.filename << ',' << e.class_id << ',' << format_double(c.pupil_cx) << ',' << format_double(c.pupil_cy)
        << ',' << format_double(c.pupil_r) << ',' << format_double(c.iris_cx) << ',' << format_double(c.iris_cy)
        << ',' << format_double(c.iris_r) << '\n';
  }
  if (!out) throw IoError("failed writing manifest " + path.string());
}

Dataset load_dataset(const std::filesystem::path& manifest_path) {
  Dataset ds;
  ds.entries = read_manifest(manifest_path);
  const auto base = manifest_path.parent_path();
  ds.images.reserve(ds.entries.size());
  for (const auto& e : ds.entries) {
    ds.images.push_back(read_image(base / e.filename));
    validate_annotation(e.circles, ds.images.back().width, ds.images.back().height);
  }
  return ds;
}

std::vector<std::uint32_t> labels_of(const std::vector<ManifestEntry>& entries) {
  std::vector<std::uint32_t> labels;
  labels.reserve(entries.size());
  for (const auto& e : entries) labels.push_back(e.class_id);
  return labels;
}

}  // namespace irisfeat
