#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace irisfeat {

// Grayscale image with intensities in [0,1], row-major.
struct EyeImage {
  int width = 0;
  int height = 0;
  std::vector<float> pixels;

  float at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Validates dims and the [0,1] range; throws ShapeError / ParameterError.
EyeImage make_image(int width, int height, std::vector<float> pixels);

/// 8-bit values map to [0,1] by division by 255.
EyeImage image_from_bytes(int width, int height, const std::vector<std::uint8_t>& bytes);
/// Inverse of image_from_bytes with round-to-nearest.
std::vector<std::uint8_t> image_to_bytes(const EyeImage& image);

// `.gray` layout: width (u32 LE), height (u32 LE), then width*height bytes.
EyeImage read_gray(const std::filesystem::path& path);
void write_gray(const std::filesystem::path& path, const EyeImage& image);

EyeImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const EyeImage& image);

/// Dispatches on extension: `.png` or `.gray`.
EyeImage read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const EyeImage& image);

}  // namespace irisfeat
