#include "irisfeat/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "irisfeat/errors.hpp"
#include "irisfeat/rng.hpp"

namespace irisfeat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kNoiseRadial = 8;
constexpr int kNoiseAngular = 32;

// Annotation values snap to 1/64 px so the manifest's fixed 6-decimal text is exact.
double snap(double v) { return std::round(v * 64.0) / 64.0; }

struct Component {
  double radial_freq;
  int angular_freq;
  double phase;
  double amplitude;
};

struct ClassModel {
  double cx, cy, iris_r, pupil_ratio;
  std::vector<Component> components;
  std::array<double, kNoiseRadial * kNoiseAngular> noise{};

  double texture(double rho, double theta) const {
    double sum = 0.0, norm = 0.0;
    for (const auto& c : components) {
      sum += c.amplitude * std::sin(kTwoPi * c.radial_freq * rho + c.angular_freq * theta + c.phase);
      norm += c.amplitude;
    }
    double v = 0.5 + 0.3 * sum / norm + 0.15 * value_noise(rho, theta);
    return std::clamp(v, 0.05, 0.95);
  }

  // Smoothstep-interpolated lattice noise, periodic in theta.
  double value_noise(double rho, double theta) const {
    double a = theta / kTwoPi;
    a -= std::floor(a);
    const double u = a * kNoiseAngular;
    const double r = std::clamp(rho, 0.0, 1.0) * (kNoiseRadial - 1);
    const int u0 = static_cast<int>(u) % kNoiseAngular;
    const int u1 = (u0 + 1) % kNoiseAngular;
    const int r0 = std::min(static_cast<int>(r), kNoiseRadial - 2);
    const double fu = u - std::floor(u);
    const double fr = r - r0;
    const auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };
    const auto at = [&](int ri, int ui) { return noise[ri * kNoiseAngular + ui]; };
    const double su = smooth(fu), sr = smooth(fr);
    const double lo = at(r0, u0) + su * (at(r0, u1) - at(r0, u0));
    const double hi = at(r0 + 1, u0) + su * (at(r0 + 1, u1) - at(r0 + 1, u0));
    return lo + sr * (hi - lo);
  }
};

ClassModel make_class(const SynthConfig& cfg, int class_id) {
  Rng rng(derive_seed(cfg.seed, "synth.class", static_cast<std::uint64_t>(class_id)));
  ClassModel m;
  const double half = cfg.image_size / 2.0;
  m.cx = snap(half + rng.uniform(-0.02, 0.02) * cfg.image_size);
  m.cy = snap(half + rng.uniform(-0.02, 0.02) * cfg.image_size);
  m.iris_r = snap(cfg.image_size * rng.uniform(0.36, 0.42));
  m.pupil_ratio = rng.uniform(0.30, 0.45);
  const int count = 8 + static_cast<int>(rng.below(9));
  for (int k = 0; k < count; ++k) {
    Component c;
    c.radial_freq = rng.uniform(0.5, 3.0);
    c.angular_freq = static_cast<int>(rng.below(33)) - 16;
    c.phase = rng.uniform(0.0, kTwoPi);
    c.amplitude = rng.uniform(0.3, 1.0);
    m.components.push_back(c);
  }
  for (auto& v : m.noise) v = rng.uniform(-1.0, 1.0);
  return m;
}

}  // namespace

void validate(const SynthConfig& cfg) {
  if (cfg.n_classes < 2) throw ConfigError("n_classes must be >= 2");
  if (cfg.samples_per_class < 2) throw ConfigError("samples_per_class must be >= 2");
  if (cfg.image_size < 32) throw ConfigError("image_size must be >= 32");
  if (!(cfg.noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be >= 0");
  if (!(cfg.rotation_jitter >= 0.0)) throw ConfigError("rotation_jitter must be >= 0");
  if (!(cfg.dilation_jitter >= 0.0 && cfg.dilation_jitter < 0.5)) {
    throw ConfigError("dilation_jitter must be in [0, 0.5)");
  }
  if (cfg.image_format != "gray" && cfg.image_format != "png") {
    throw ConfigError("image_format must be 'gray' or 'png'");
  }
}

SynthSample render_sample(const SynthConfig& cfg, int class_id, int sample_id) {
  validate(cfg);
  const ClassModel model = make_class(cfg, class_id);
  Rng rng(derive_seed(cfg.seed, "synth.sample",
                      (static_cast<std::uint64_t>(class_id) << 32) | static_cast<std::uint32_t>(sample_id)));
  const double rotation = rng.uniform(-cfg.rotation_jitter, cfg.rotation_jitter);
  const double dilation = 1.0 + rng.uniform(-cfg.dilation_jitter, cfg.dilation_jitter);

  SynthSample s;
  s.circles.iris_cx = s.circles.pupil_cx = model.cx;
  s.circles.iris_cy = s.circles.pupil_cy = model.cy;
  s.circles.iris_r = model.iris_r;
  s.circles.pupil_r = snap(model.iris_r * model.pupil_ratio * dilation);

  const int n = cfg.image_size;
  std::vector<float> pixels(static_cast<std::size_t>(n) * n);
  const double pr = s.circles.pupil_r;
  const double ir = s.circles.iris_r;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double dx = x - model.cx;
      const double dy = model.cy - y;
      const double r = std::hypot(dx, dy);
      double v;
      if (r < pr) {
        v = 0.08;
      } else if (r <= ir) {
        v = model.texture((r - pr) / (ir - pr), std::atan2(dy, dx) - rotation);
      } else {
        v = 0.78 - 0.1 * std::min(1.0, (r - ir) / ir);
      }
      if (cfg.noise_sigma > 0.0) v += cfg.noise_sigma * rng.normal();
      pixels[static_cast<std::size_t>(y) * n + x] = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
  }
  // Quantize through 8 bits so in-memory samples match what lands on disk.
  s.image = image_from_bytes(n, n, image_to_bytes(EyeImage{n, n, std::move(pixels)}));
  return s;
}

std::filesystem::path generate(const SynthConfig& cfg, const std::filesystem::path& out_dir) {
  validate(cfg);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<ManifestEntry> entries;
  for (int c = 0; c < cfg.n_classes; ++c) {
    for (int s = 0; s < cfg.samples_per_class; ++s) {
      char name[64];
      std::snprintf(name, sizeof name, "c%04d_s%03d.%s", c, s, cfg.image_format.c_str());
      const auto sample = render_sample(cfg, c, s);
      write_image(out_dir / name, sample.image);
      entries.push_back({name, static_cast<std::uint32_t>(c), sample.circles});
    }
  }
  const auto manifest = out_dir / "manifest.csv";
  write_manifest(manifest, entries);
  return manifest;
}

}  // namespace irisfeat
