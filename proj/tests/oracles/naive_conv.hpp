#pragma once

// Direct cross-correlation, one output value at a time, double accumulation.
// Deliberately shares nothing with the engine beyond the parameter layout.

#include <vector>

namespace oracle {

struct ConvGeometry {
  int in_c, in_h, in_w;
  int out_c, kh, kw;
  int sh, sw, ph, pw;
  int out_h() const { return in_h + 2 * ph < kh ? 0 : (in_h + 2 * ph - kh) / sh + 1; }
  int out_w() const { return in_w + 2 * pw < kw ? 0 : (in_w + 2 * pw - kw) / sw + 1; }
};

// input: in_c x in_h x in_w; weights: out_c x in_c x kh x kw; bias may be empty.
inline std::vector<float> naive_conv(const std::vector<float>& input, const std::vector<float>& weights,
                                     const std::vector<float>& bias, const ConvGeometry& g) {
  const int oh = g.out_h();
  const int ow = g.out_w();
  std::vector<float> out(static_cast<std::size_t>(g.out_c) * oh * ow);
  for (int o = 0; o < g.out_c; ++o) {
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) {
        double acc = bias.empty() ? 0.0 : bias[o];
        for (int c = 0; c < g.in_c; ++c) {
          for (int ky = 0; ky < g.kh; ++ky) {
            for (int kx = 0; kx < g.kw; ++kx) {
              const int iy = y * g.sh - g.ph + ky;
              const int ix = x * g.sw - g.pw + kx;
              if (iy < 0 || iy >= g.in_h || ix < 0 || ix >= g.in_w) continue;
              acc += static_cast<double>(input[(static_cast<std::size_t>(c) * g.in_h + iy) * g.in_w + ix]) *
                     weights[((static_cast<std::size_t>(o) * g.in_c + c) * g.kh + ky) * g.kw + kx];
            }
          }
        }
        out[(static_cast<std::size_t>(o) * oh + y) * ow + x] = static_cast<float>(acc);
      }
    }
  }
  return out;
}

}  // namespace oracle
