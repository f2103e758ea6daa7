#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "irisfeat/image.hpp"
#include "irisfeat/manifest.hpp"

namespace irisfeat {

struct SynthConfig {
  int n_classes = 20;
  int samples_per_class = 10;
  int image_size = 160;
  std::uint64_t seed = 42;
  double rotation_jitter = 0.05;  // radians, uniform in [-j, j]
  double dilation_jitter = 0.10;  // fraction of the pupil radius
  double noise_sigma = 0.03;      // additive Gaussian, intensity units
  std::string image_format = "gray";  // "gray" or "png"
};

/// Throws ConfigError on n_classes < 2, samples_per_class < 2, negative noise, etc.
void validate(const SynthConfig& cfg);

struct SynthSample {
  EyeImage image;
  CircleAnnotation circles;
};

// Renders one sample without touching the filesystem. The class texture is
// seeded by (seed, class_id) and the perturbations by (seed, class_id, sample_id).
SynthSample render_sample(const SynthConfig& cfg, int class_id, int sample_id);

/// Writes every image plus `manifest.csv` into out_dir and returns the manifest path.
std::filesystem::path generate(const SynthConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace irisfeat
