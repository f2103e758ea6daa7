#pragma once

#include <vector>

#include "irisfeat/image.hpp"
#include "irisfeat/tensor.hpp"

namespace irisfeat {

struct CircleAnnotation {
  double pupil_cx = 0, pupil_cy = 0, pupil_r = 0;
  double iris_cx = 0, iris_cy = 0, iris_r = 0;

  bool operator==(const CircleAnnotation&) const = default;
};

inline constexpr int kNormalizedRows = 64;
inline constexpr int kNormalizedCols = 512;

// Unwrapped iris texture. Row 0 lies on the pupil boundary, the last row on
// the iris boundary; column j is angle 2*pi*j/cols.
struct NormalizedIris {
  int rows = kNormalizedRows;
  int cols = kNormalizedCols;
  std::vector<float> values;

  float at(int i, int j) const { return values[static_cast<std::size_t>(i) * cols + j]; }
};

/// Throws InvalidAnnotationError for non-positive radii or centers outside the image.
void validate_annotation(const CircleAnnotation& circles, int width, int height);

/// Daugman rubber sheet with non-concentric support.
///
/// Angle theta_j = theta_offset + 2*pi*j/angular; theta = 0 points along +x and
/// grows counterclockwise as seen on screen, so boundary points are
/// (cx + r cos(theta), cy - r sin(theta)) in image coordinates (y down).
/// Row i samples P + i/(radial-1) * (I - P) bilinearly, clamping to edge pixels.
NormalizedIris rubber_sheet(const EyeImage& image, const CircleAnnotation& circles, int radial = kNormalizedRows,
                            int angular = kNormalizedCols, double theta_offset = 0.0);

/// Bilinear sample with edge clamping; pixel centers sit on integer coordinates.
double sample_bilinear(const EyeImage& image, double x, double y);

/// 3 x rows x cols tensor with the texture copied into every channel.
Tensor replicate_channels(const NormalizedIris& iris);

}  // namespace irisfeat
