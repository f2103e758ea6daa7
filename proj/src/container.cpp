#include "irisfeat/container.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "irisfeat/errors.hpp"

namespace irisfeat {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

void ByteWriter::u16(std::uint16_t v) {
  u8(static_cast<std::uint8_t>(v));
  u8(static_cast<std::uint8_t>(v >> 8));
}

void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

void ByteWriter::f32s(std::span<const float> values) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(values.data());
  bytes_.insert(bytes_.end(), p, p + values.size_bytes());
}

void ByteWriter::raw(std::string_view text) { bytes_.insert(bytes_.end(), text.begin(), text.end()); }

void ByteReader::need(std::size_t n) const {
  if (!has(n)) throw FormatError("unexpected end of data at byte " + std::to_string(pos_));
}

std::uint8_t ByteReader::u8() {
  need(1);
  return bytes_[pos_++];
}

std::uint16_t ByteReader::u16() {
  need(2);
  const auto v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
  pos_ += 2;
  return v;
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
  pos_ += 4;
  return v;
}

float ByteReader::f32() { return std::bit_cast<float>(u32()); }

void ByteReader::f32s(std::span<float> out) {
  need(out.size_bytes());
  std::memcpy(out.data(), bytes_.data() + pos_, out.size_bytes());
  pos_ += out.size_bytes();
}

std::string ByteReader::text(std::size_t n) {
  need(n);
  std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
  pos_ += n;
  return s;
}

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - offset, 1u << 30));
    crc = crc32(crc, bytes.data() + offset, chunk);
    offset += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::size_t ContainerEntry::expected_count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

const ContainerEntry* Container::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

void Container::add(std::string name, std::vector<std::uint32_t> dims, std::vector<float> values) {
  ContainerEntry e{std::move(name), std::move(dims), std::move(values)};
  if (e.values.size() != e.expected_count()) {
    throw ShapeError("entry '" + e.name + "' has " + std::to_string(e.values.size()) + " values for dims needing " +
                     std::to_string(e.expected_count()));
  }
  entries.push_back(std::move(e));
}

std::vector<std::uint8_t> encode_container(const Container& container) {
  ByteWriter w;
  w.raw("LPWT");
  w.u32(kContainerVersion);
  w.u32(static_cast<std::uint32_t>(container.entries.size()));
  for (const auto& e : container.entries) {
    if (e.name.size() > 0xffff) throw ParameterError("entry name too long: " + e.name.substr(0, 32));
    if (e.dims.size() > 0xff) throw ParameterError("entry rank too large: " + e.name);
    if (e.values.size() != e.expected_count()) {
      throw ShapeError("entry '" + e.name + "' value count does not match its dims");
    }
    w.u16(static_cast<std::uint16_t>(e.name.size()));
    w.raw(e.name);
    w.u8(static_cast<std::uint8_t>(e.dims.size()));
    for (auto d : e.dims) w.u32(d);
    w.f32s(e.values);
  }
  w.u32(crc32_of(w.bytes()));
  return std::move(w.bytes());
}

Container decode_container(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (!r.has(12) || r.text(4) != "LPWT") throw FormatError("bad magic (expected LPWT)");
  const auto version = r.u32();
  if (version != kContainerVersion) throw FormatError("unsupported LPWT version " + std::to_string(version));
  const auto count = r.u32();

  Container c;
  for (std::uint32_t i = 0; i < count; ++i) {
    if (!r.has(2)) throw CompletenessError("entry #" + std::to_string(i) + " missing (data truncated)");
    const auto name_len = r.u16();
    if (!r.has(name_len + 1u)) throw CompletenessError("entry #" + std::to_string(i) + " truncated in its name");
    ContainerEntry e;
    e.name = r.text(name_len);
    const auto rank = r.u8();
    if (!r.has(4u * rank)) throw CompletenessError("entry '" + e.name + "' truncated in its dims");
    for (int d = 0; d < rank; ++d) e.dims.push_back(r.u32());
    const auto n = e.expected_count();
    if (r.remaining() / 4 < n) {
      throw CompletenessError("entry '" + e.name + "' truncated: needs " + std::to_string(n) + " values");
    }
    e.values.resize(n);
    r.f32s(e.values);
    c.entries.push_back(std::move(e));
  }
  const auto payload = r.position();
  if (!r.has(4)) throw FormatError("missing trailing CRC32");
  const auto stored = r.u32();
  if (stored != crc32_of(bytes.first(payload))) throw FormatError("CRC32 mismatch");
  if (r.remaining() != 0) throw FormatError("trailing bytes after CRC32");
  return c;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

void write_container(const std::filesystem::path& path, const Container& container) {
  write_file_bytes(path, encode_container(container));
}

Container read_container(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_container(bytes);
  } catch (const Error& e) {
    rethrow_with_context(e, path.string());
  }
}

}  // namespace irisfeat
