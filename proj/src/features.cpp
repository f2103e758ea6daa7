#include "irisfeat/features.hpp"

#include <algorithm>

#include "irisfeat/container.hpp"
#include "irisfeat/errors.hpp"

namespace irisfeat {

namespace {
constexpr std::uint32_t kFeatureVersion = 1;
}

void FeatureMatrix::validate() const {
  if (n < 0 || d < 1) throw ShapeError("feature matrix needs d >= 1 (n=" + std::to_string(n) + ", d=" + std::to_string(d) + ")");
  if (data.size() != static_cast<std::size_t>(n) * d) throw ShapeError("feature data length != n*d");
  if (labels.size() != static_cast<std::size_t>(n)) throw ShapeError("feature labels length != n");
}

std::vector<float> flatten(const Tensor& tap) { return {tap.values().begin(), tap.values().end()}; }

Tensor unflatten(std::span<const float> values, const Shape& shape) {
  return Tensor(shape, std::vector<float>(values.begin(), values.end()));
}

FeatureMatrix select_rows(const FeatureMatrix& m, std::span<const std::size_t> rows) {
  FeatureMatrix out;
  out.n = static_cast<int>(rows.size());
  out.d = m.d;
  out.tap = m.tap;
  out.layer_name = m.layer_name;
  out.data.reserve(rows.size() * static_cast<std::size_t>(m.d));
  for (auto r : rows) {
    const auto src = m.row(static_cast<int>(r));
    out.data.insert(out.data.end(), src.begin(), src.end());
    out.labels.push_back(m.labels[r]);
  }
  return out;
}

MinMaxScaler minmax_fit(const FeatureMatrix& train) {
  train.validate();
  if (train.n < 1) throw InsufficientDataError("min-max fit needs at least one row");
  MinMaxScaler s;
  const auto first = train.row(0);
  s.mins.assign(first.begin(), first.end());
  s.maxs.assign(first.begin(), first.end());
  for (int i = 1; i < train.n; ++i) {
    const auto r = train.row(i);
    for (int j = 0; j < train.d; ++j) {
      s.mins[j] = std::min(s.mins[j], r[j]);
      s.maxs[j] = std::max(s.maxs[j], r[j]);
    }
  }
  return s;
}

FeatureMatrix minmax_transform(const MinMaxScaler& scaler, FeatureMatrix m) {
  m.validate();
  if (scaler.mins.size() != static_cast<std::size_t>(m.d) || scaler.maxs.size() != scaler.mins.size()) {
    throw ShapeError("scaler fitted on d=" + std::to_string(scaler.mins.size()) + ", matrix has d=" +
                     std::to_string(m.d));
  }
  for (int i = 0; i < m.n; ++i) {
    auto r = m.row(i);
    for (int j = 0; j < m.d; ++j) {
      const float lo = scaler.mins[j];
      const float hi = scaler.maxs[j];
      r[j] = hi > lo ? (r[j] - lo) / (hi - lo) : 0.0f;
    }
  }
  return m;
}

std::vector<std::uint8_t> encode_features(const FeatureMatrix& m) {
  m.validate();
  if (m.tap < 0 || m.tap > 0xffff) throw ParameterError("tap index does not fit u16");
  if (m.layer_name.size() > 0xffff) throw ParameterError("layer name too long");
  ByteWriter w;
  w.raw("LPFM");
  w.u32(kFeatureVersion);
  w.u32(static_cast<std::uint32_t>(m.n));
  w.u32(static_cast<std::uint32_t>(m.d));
  w.u16(static_cast<std::uint16_t>(m.tap));
  w.u16(static_cast<std::uint16_t>(m.layer_name.size()));
  w.raw(m.layer_name);
  for (auto label : m.labels) w.u32(label);
  w.f32s(m.data);
  w.u32(crc32_of(w.bytes()));
  return std::move(w.bytes());
}

FeatureMatrix decode_features(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (!r.has(4) || r.text(4) != "LPFM") throw FormatError("bad magic (expected LPFM)");
  const auto version = r.u32();
  if (version != kFeatureVersion) throw FormatError("unsupported LPFM version " + std::to_string(version));
  FeatureMatrix m;
  const auto n = r.u32();
  const auto d = r.u32();
  m.tap = r.u16();
  m.layer_name = r.text(r.u16());
  if (d == 0) throw FormatError("LPFM with d = 0");
  const std::size_t total = static_cast<std::size_t>(n) * d;
  if (r.remaining() < 4ull * n + 4ull * total + 4) {
    throw CompletenessError("feature matrix for tap " + std::to_string(m.tap) + " is truncated");
  }
  m.n = static_cast<int>(n);
  m.d = static_cast<int>(d);
  m.labels.resize(n);
  for (auto& label : m.labels) label = r.u32();
  m.data.resize(total);
  r.f32s(m.data);
  const auto payload = r.position();
  const auto stored = r.u32();
  if (stored != crc32_of(bytes.first(payload))) throw FormatError("CRC32 mismatch");
  if (r.remaining() != 0) throw FormatError("trailing bytes after CRC32");
  return m;
}

void write_features(const std::filesystem::path& path, const FeatureMatrix& m) {
  write_file_bytes(path, encode_features(m));
}

FeatureMatrix read_features(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_features(bytes);
  } catch (const Error& e) {
    rethrow_with_context(e, path.string());
  }
}

}  // namespace irisfeat
