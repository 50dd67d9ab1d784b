#pragma once

#include "bayesr/degradation.hpp"
#include "bayesr/image.hpp"

namespace bayesr {

// Evaluation conventions. Super-resolution results are scored on luma with
// s + 4 pixels ignored on every side.
struct MetricConfig {
  int border_crop = 0;
  bool use_y_channel = false;
  int scale = 1;

  static MetricConfig super_resolution(int scale) {
    return {scale + 4, true, scale};
  }
  void validate() const;
};

// Value printed in place of an infinite PSNR.
inline constexpr double kPsnrCap = 99.99;

// BT.601 luma (0.299 R + 0.587 G + 0.114 B); a gray stack is returned as is.
ImagePlane luma(const ImageStack& image);

// 10 log10(1 / MSE) on images clamped to [0, 1]; +infinity when identical.
double psnr(const ImageStack& a, const ImageStack& b,
            const MetricConfig& cfg = {});
double psnr(const ImagePlane& a, const ImagePlane& b);

// Single-scale SSIM with an 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
// K2 = 0.03 and unit dynamic range, averaged over valid window positions.
double ssim(const ImagePlane& a, const ImagePlane& b);
// Per channel (or on luma) after the configured border crop, then averaged.
double ssim(const ImageStack& a, const ImageStack& b,
            const MetricConfig& cfg = {});

// PSNR between the degraded restoration and the observation, all channels,
// no crop.
double lrpsnr(const ImageStack& restored_hr, const ImageStack& y,
              const DegradationOperator& op);

struct ShiftedPsnr {
  double psnr = 0.0;
  int dx = 0;
  int dy = 0;
};

// Maximum PSNR between the central crop x crop patch of `a` and the patch of
// `b` displaced by (dx, dy), |dx|, |dy| <= max_shift: a(r, c) is compared with
// b(r - dy, c - dx). A shift replaces the current best only when strictly
// better, starting from (0, 0), so ties resolve to (0, 0) or the first shift
// in row-major order of (dy, dx).
ShiftedPsnr shifted_max_psnr(const ImageStack& a, const ImageStack& b,
                             int crop = 60, int max_shift = 40);

}  // namespace bayesr
