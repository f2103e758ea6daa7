#include "irisfeat/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "irisfeat/errors.hpp"

namespace irisfeat {

void validate_annotation(const CircleAnnotation& c, int width, int height) {
  if (!(c.pupil_r > 0.0) || !(c.iris_r > 0.0)) {
    throw InvalidAnnotationError("radii must be positive (pupil_r=" + std::to_string(c.pupil_r) +
                                 ", iris_r=" + std::to_string(c.iris_r) + ")");
  }
  const auto inside = [&](double x, double y) { return x >= 0.0 && y >= 0.0 && x <= width - 1 && y <= height - 1; };
  if (!inside(c.pupil_cx, c.pupil_cy)) throw InvalidAnnotationError("pupil center outside the image");
  if (!inside(c.iris_cx, c.iris_cy)) throw InvalidAnnotationError("iris center outside the image");
}

double sample_bilinear(const EyeImage& image, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(image.width - 1));
  y = std::clamp(y, 0.0, static_cast<double>(image.height - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, image.width - 1);
  const int y1 = std::min(y0 + 1, image.height - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = image.at(x0, y0) + fx * (image.at(x1, y0) - image.at(x0, y0));
  const double bottom = image.at(x0, y1) + fx * (image.at(x1, y1) - image.at(x0, y1));
  return top + fy * (bottom - top);
}

NormalizedIris rubber_sheet(const EyeImage& image, const CircleAnnotation& circles, int radial, int angular,
                            double theta_offset) {
  if (radial < 2 || angular < 1) {
    throw ParameterError("rubber_sheet needs radial >= 2 and angular >= 1");
  }
  validate_annotation(circles, image.width, image.height);

  NormalizedIris out;
  out.rows = radial;
  out.cols = angular;
  out.values.resize(static_cast<std::size_t>(radial) * angular);

  for (int j = 0; j < angular; ++j) {
    const double theta = theta_offset + 2.0 * std::numbers::pi * j / angular;
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);
    const double px = circles.pupil_cx + circles.pupil_r * cos_t;
    const double py = circles.pupil_cy - circles.pupil_r * sin_t;
    const double ix = circles.iris_cx + circles.iris_r * cos_t;
    const double iy = circles.iris_cy - circles.iris_r * sin_t;
    if (std::hypot(ix - px, iy - py) < 1e-9) {
      throw DegenerateAnnotationError("pupil and iris boundaries coincide at column " + std::to_string(j));
    }
    for (int i = 0; i < radial; ++i) {
      const double t = static_cast<double>(i) / (radial - 1);
      const double v = sample_bilinear(image, px + t * (ix - px), py + t * (iy - py));
      out.values[static_cast<std::size_t>(i) * angular + j] = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
  }
  return out;
}

Tensor replicate_channels(const NormalizedIris& iris) {
  Tensor out(Shape{3, iris.rows, iris.cols});
  for (int c = 0; c < 3; ++c) std::copy(iris.values.begin(), iris.values.end(), out.channel(c).begin());
  return out;
}

}  // namespace irisfeat
