#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace irisfeat {

// Named float32 tensor inside an LPWT container. Rank 0 holds one value.
struct ContainerEntry {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::vector<float> values;

  std::size_t expected_count() const;
  bool operator==(const ContainerEntry&) const = default;
};

// LPWT layout, all integers little-endian:
//   "LPWT" | version u32 | entry count u32
//   per entry: name length u16 | UTF-8 name | rank u8 | dims u32 x rank | f32 x prod(dims)
//   CRC32 (zlib polynomial) of every preceding byte
struct Container {
  std::vector<ContainerEntry> entries;

  const ContainerEntry* find(const std::string& name) const;
  void add(std::string name, std::vector<std::uint32_t> dims, std::vector<float> values);
  void add_scalar(std::string name, float value) { add(std::move(name), {}, {value}); }
};

inline constexpr std::uint32_t kContainerVersion = 1;

std::vector<std::uint8_t> encode_container(const Container& container);
/// FormatError on bad magic/version/checksum; CompletenessError naming an entry cut short.
Container decode_container(std::span<const std::uint8_t> bytes);

void write_container(const std::filesystem::path& path, const Container& container);
Container read_container(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes);

// Little-endian byte writer / reader shared by the binary formats.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void f32(float v);
  void f32s(std::span<const float> values);
  void raw(std::string_view text);
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  bool has(std::size_t n) const { return pos_ + n <= bytes_.size(); }
  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  float f32();
  void f32s(std::span<float> out);
  std::string text(std::size_t n);
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const;
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace irisfeat
