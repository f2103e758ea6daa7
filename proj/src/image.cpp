#include "irisfeat/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include "irisfeat/errors.hpp"

namespace irisfeat {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw FormatError("truncated .gray header");
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

EyeImage make_image(int width, int height, std::vector<float> pixels) {
  if (width < 1 || height < 1) {
    throw ShapeError("image dims must be >= 1, got " + std::to_string(width) + "x" + std::to_string(height));
  }
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw ShapeError("image pixel count does not match " + std::to_string(width) + "x" + std::to_string(height));
  }
  for (float v : pixels) {
    if (!(v >= 0.0f && v <= 1.0f)) throw ParameterError("image intensity outside [0,1]");
  }
  return EyeImage{width, height, std::move(pixels)};
}

EyeImage image_from_bytes(int width, int height, const std::vector<std::uint8_t>& bytes) {
  std::vector<float> pixels(bytes.size());
  std::transform(bytes.begin(), bytes.end(), pixels.begin(), [](std::uint8_t b) { return b / 255.0f; });
  return make_image(width, height, std::move(pixels));
}

std::vector<std::uint8_t> image_to_bytes(const EyeImage& image) {
  std::vector<std::uint8_t> bytes(image.pixels.size());
  std::transform(image.pixels.begin(), image.pixels.end(), bytes.begin(), [](float v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
  });
  return bytes;
}

EyeImage read_gray(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const auto width = get_u32(in);
  const auto height = get_u32(in);
  if (width == 0 || height == 0 || width > (1u << 16) || height > (1u << 16)) {
    throw FormatError(path.string() + ": implausible dims " + std::to_string(width) + "x" + std::to_string(height));
  }
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(width) * height);
  if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) {
    throw FormatError(path.string() + ": truncated pixel data");
  }
  return image_from_bytes(static_cast<int>(width), static_cast<int>(height), bytes);
}

void write_gray(const std::filesystem::path& path, const EyeImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  put_u32(out, static_cast<std::uint32_t>(image.width));
  put_u32(out, static_cast<std::uint32_t>(image.height));
  const auto bytes = image_to_bytes(image);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

EyeImage read_png(const std::filesystem::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    throw FormatError(path.string() + ": " + img.message);
  }
  img.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> bytes(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, bytes.data(), 0, nullptr)) {
    png_image_free(&img);
    throw FormatError(path.string() + ": " + img.message);
  }
  return image_from_bytes(static_cast<int>(img.width), static_cast<int>(img.height), bytes);
}

void write_png(const std::filesystem::path& path, const EyeImage& image) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot write " + path.string());
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = PNG_FORMAT_GRAY;
  const auto bytes = image_to_bytes(image);
  if (!png_image_write_to_stdio(&img, file.get(), 0, bytes.data(), 0, nullptr)) {
    throw IoError(path.string() + ": " + img.message);
  }
}

EyeImage read_image(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".png" || ext == ".PNG") return read_png(path);
  if (ext == ".gray") return read_gray(path);
  throw FormatError("unsupported image extension '" + ext + "' for " + path.string());
}

void write_image(const std::filesystem::path& path, const EyeImage& image) {
  const auto ext = path.extension().string();
  if (ext == ".png") return write_png(path, image);
  if (ext == ".gray") return write_gray(path, image);
  throw FormatError("unsupported image extension '" + ext + "' for " + path.string());
}

}  // namespace irisfeat
