#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "irisfeat/normalize.hpp"

namespace irisfeat {

// One manifest row. `filename` is relative to the manifest's directory.
struct ManifestEntry {
  std::string filename;
  std::uint32_t class_id = 0;
  CircleAnnotation circles;

  bool operator==(const ManifestEntry&) const = default;
};

inline constexpr const char* kManifestHeader = "filename,class_id,pupil_cx,pupil_cy,pupil_r,iris_cx,iris_cy,iris_r";

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

// A manifest joined with decoded images, ready for normalization.
struct Dataset {
  std::vector<ManifestEntry> entries;
  std::vector<EyeImage> images;
};

Dataset load_dataset(const std::filesystem::path& manifest_path);

std::vector<std::uint32_t> labels_of(const std::vector<ManifestEntry>& entries);

}  // namespace irisfeat
