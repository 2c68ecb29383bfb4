#include "wsg/haar_swt.hpp"

#include <cmath>

namespace wsg {

namespace {

// out[n] = t0*x[n] + t1*x[(n+d) mod N], along rows or columns.
void filter_rows(const Plane& in, double t0, double t1, int dilation, Plane& out) {
  int w = in.width, h = in.height;
  for (int i = 0; i < h; ++i) {
    const double* src = &in.values[static_cast<size_t>(i) * w];
    double* dst = &out.values[static_cast<size_t>(i) * w];
    for (int j = 0; j < w; ++j) {
      int jn = j + dilation;
      if (jn >= w) jn -= w * ((jn) / w);
      dst[j] = t0 * src[j] + t1 * src[jn];
    }
  }
}

void filter_cols(const Plane& in, double t0, double t1, int dilation, Plane& out) {
  int w = in.width, h = in.height;
  for (int i = 0; i < h; ++i) {
    int in_ = i + dilation;
    if (in_ >= h) in_ -= h * (in_ / h);
    const double* s0 = &in.values[static_cast<size_t>(i) * w];
    const double* s1 = &in.values[static_cast<size_t>(in_) * w];
    double* dst = &out.values[static_cast<size_t>(i) * w];
    for (int j = 0; j < w; ++j) dst[j] = t0 * s0[j] + t1 * s1[j];
  }
}

struct LevelBands {
  Plane ll, lh, hl, hh;
};

// One a-trous level at the given dilation. Orientation convention:
// Horizontal = lowpass along rows, highpass along columns (lh);
// Vertical = highpass along rows, lowpass along columns (hl);
// Diagonal = highpass along both (hh).
LevelBands swt_level(const Plane& a, int dilation, bool details_needed) {
  auto [h, g] = haar_kernels();
  Plane lo(a.width, a.height), hi(a.width, a.height);
  filter_rows(a, h[0], h[1], dilation, lo);
  LevelBands bands{Plane(a.width, a.height), Plane(a.width, a.height),
                   Plane(a.width, a.height), Plane(a.width, a.height)};
  filter_cols(lo, h[0], h[1], dilation, bands.ll);
  if (details_needed) {
    filter_rows(a, g[0], g[1], dilation, hi);
    filter_cols(lo, g[0], g[1], dilation, bands.lh);
    filter_cols(hi, h[0], h[1], dilation, bands.hl);
    filter_cols(hi, g[0], g[1], dilation, bands.hh);
  }
  return bands;
}

void check_input(const Plane& plane, int levels) {
  if (levels < 1) throw Error("swt2d: level count must be >= 1");
  if (plane.width < 1 || plane.height < 1) throw Error("swt2d: empty plane");
  for (double v : plane.values)
    if (!std::isfinite(v)) throw Error("swt2d: non-finite input value");
}

// Equivalent 1D filter of the cascade h(w) h(2w) ... h(2^{j-2} w) * last(2^{j-1} w),
// expanded as an explicit tap array of length 2^j (circular support).
std::vector<double> expanded_filter(int level, bool last_is_highpass) {
  auto [h, g] = haar_kernels();
  std::vector<double> taps = {1.0};
  for (int j = 1; j <= level; ++j) {
    int dilation = 1 << (j - 1);
    const auto& k = (j == level && last_is_highpass) ? g : h;
    std::vector<double> next(taps.size() + dilation, 0.0);
    for (size_t n = 0; n < taps.size(); ++n) {
      next[n] += k[0] * taps[n];
      next[n + dilation] += k[1] * taps[n];
    }
    taps = std::move(next);
  }
  return taps;
}

Plane conv_direct(const Plane& in, const std::vector<double>& row_taps,
                  const std::vector<double>& col_taps) {
  Plane out(in.width, in.height);
  for (int i = 0; i < in.height; ++i) {
    for (int j = 0; j < in.width; ++j) {
      double acc = 0;
      for (size_t a = 0; a < col_taps.size(); ++a) {
        int ii = static_cast<int>((i + a) % in.height);
        for (size_t b = 0; b < row_taps.size(); ++b) {
          int jj = static_cast<int>((j + b) % in.width);
          acc += col_taps[a] * row_taps[b] * in.at(ii, jj);
        }
      }
      out.at(i, j) = acc;
    }
  }
  return out;
}

}  // namespace

HaarKernels haar_kernels() {
  return {{0.5, 0.5}, {0.5, -0.5}};
}

const Plane& SwtPyramid::detail(int scale, Orientation r) const {
  for (const auto& sb : details)
    if (sb.scale == scale && sb.orientation == r) return sb.plane;
  throw Error("SwtPyramid: no such detail subband");
}

SwtPyramid swt2d(const Plane& plane, int levels) {
  check_input(plane, levels);
  SwtPyramid pyr;
  pyr.levels = levels;
  Plane approx = plane;
  for (int j = 1; j <= levels; ++j) {
    LevelBands bands = swt_level(approx, 1 << (j - 1), true);
    pyr.details.push_back({j, Orientation::Horizontal, std::move(bands.lh)});
    pyr.details.push_back({j, Orientation::Vertical, std::move(bands.hl)});
    pyr.details.push_back({j, Orientation::Diagonal, std::move(bands.hh)});
    approx = std::move(bands.ll);
  }
  pyr.approx = {levels, Orientation::Approx, std::move(approx)};
  return pyr;
}

SwtPyramid swt2d_direct(const Plane& plane, int levels) {
  check_input(plane, levels);
  SwtPyramid pyr;
  pyr.levels = levels;
  for (int j = 1; j <= levels; ++j) {
    auto lo = expanded_filter(j, false);
    auto hi = expanded_filter(j, true);
    pyr.details.push_back({j, Orientation::Horizontal, conv_direct(plane, lo, hi)});
    pyr.details.push_back({j, Orientation::Vertical, conv_direct(plane, hi, lo)});
    pyr.details.push_back({j, Orientation::Diagonal, conv_direct(plane, hi, hi)});
  }
  auto lo = expanded_filter(levels, false);
  pyr.approx = {levels, Orientation::Approx, conv_direct(plane, lo, lo)};
  return pyr;
}

Plane lowpass_cascade(const Plane& plane, int levels) {
  check_input(plane, levels);
  Plane approx = plane;
  for (int j = 1; j <= levels; ++j) {
    LevelBands bands = swt_level(approx, 1 << (j - 1), false);
    approx = std::move(bands.ll);
  }
  return approx;
}

double bessel_energy_ratio(const SwtPyramid& pyr, const Plane& input, bool* degenerate) {
  double in_energy = plane_energy(input);
  if (degenerate) *degenerate = (in_energy == 0.0);
  if (in_energy == 0.0) return 1.0;
  double out_energy = plane_energy(pyr.approx.plane);
  for (const auto& sb : pyr.details) out_energy += plane_energy(sb.plane);
  return out_energy / in_energy;
}

OpReport nominal_op_count(int width, int height, int levels, int orientations,
                        int channels) {
  if (width < 1 || height < 1 || levels < 1 || orientations < 1 || channels < 0)
    throw Error("nominal_op_count: non-positive dimension");
  double wh = static_cast<double>(width) * height;
  double j = levels, r = orientations;
  OpReport rep;
  rep.swt_additions = channels * (6.0 * wh * j + 1.5 * wh * r * j * j);
  rep.chi_additions = channels * (0.5 * wh * j * r * r * j * j);
  rep.abs_ops = channels * (wh * r * j * (1.0 + r * j / 4.0));
  rep.interpolation_ops = channels * (8.0 * wh * (r * j + 1.0) * r * j);
  rep.total_ops = rep.swt_additions + rep.chi_additions + rep.abs_ops +
                  rep.interpolation_ops;
  return rep;
}

}  // namespace wsg
