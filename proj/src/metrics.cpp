#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "bayesr/error.hpp"
#include "bayesr/metrics.hpp"

namespace bayesr {

namespace {

constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

void require_same_stack(const ImageStack& a, const ImageStack& b,
                        const char* context) {
  if (a.channels() != b.channels() || !(a.shape() == b.shape())) {
    throw InvalidInput(std::string(context) +
                       ": images differ in shape or channel count");
  }
}

double psnr_from_sse(double sse, std::size_t count) {
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(count) / sse);
}

double clamped_sse(const ImagePlane& a, const ImagePlane& b) {
  double sse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::clamp(a[i], 0.0, 1.0) - std::clamp(b[i], 0.0, 1.0);
    sse += d * d;
  }
  return sse;
}

std::vector<ImagePlane> prepare(const ImageStack& img,
                                const MetricConfig& cfg) {
  std::vector<ImagePlane> planes;
  if (cfg.use_y_channel) {
    planes.push_back(luma(img));
  } else {
    planes = img.planes();
  }
  if (cfg.border_crop > 0) {
    const int b = cfg.border_crop;
    for (ImagePlane& p : planes) {
      p = crop(p, b, b, p.height() - 2 * b, p.width() - 2 * b);
    }
  }
  return planes;
}

void check_crop(const ImageStack& a, const MetricConfig& cfg) {
  cfg.validate();
  const Shape s = a.shape();
  if (s.height <= 2 * cfg.border_crop || s.width <= 2 * cfg.border_crop) {
    throw InvalidInput("metric: border crop " +
                       std::to_string(cfg.border_crop) +
                       " leaves no pixels");
  }
}

std::array<double, kWindow> gaussian_window() {
  std::array<double, kWindow> w{};
  double total = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    w[i] = std::exp(-d * d / (2.0 * kWindowSigma * kWindowSigma));
    total += w[i];
  }
  for (double& v : w) v /= total;
  return w;
}

// Valid-mode separable filtering with the normalized Gaussian window.
ImagePlane filter_valid(const ImagePlane& p,
                        const std::array<double, kWindow>& w) {
  const int oh = p.height() - kWindow + 1;
  const int ow = p.width() - kWindow + 1;
  ImagePlane rows(p.height(), ow);
  for (int r = 0; r < p.height(); ++r) {
    for (int c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += w[k] * p(r, c + k);
      rows(r, c) = acc;
    }
  }
  ImagePlane out(oh, ow);
  for (int r = 0; r < oh; ++r) {
    for (int c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += w[k] * rows(r + k, c);
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace

void MetricConfig::validate() const {
  if (border_crop < 0) throw InvalidInput("MetricConfig: border_crop < 0");
  if (scale < 1) throw InvalidInput("MetricConfig: scale must be >= 1");
}

ImagePlane luma(const ImageStack& image) {
  if (image.channels() == 1) return image.channel(0);
  if (image.channels() != 3) {
    throw InvalidInput("luma: expected 1 or 3 channels");
  }
  const ImagePlane& r = image.channel(0);
  const ImagePlane& g = image.channel(1);
  const ImagePlane& b = image.channel(2);
  ImagePlane y(image.shape());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = 0.299 * std::clamp(r[i], 0.0, 1.0) +
           0.587 * std::clamp(g[i], 0.0, 1.0) +
           0.114 * std::clamp(b[i], 0.0, 1.0);
  }
  return y;
}

double psnr(const ImagePlane& a, const ImagePlane& b) {
  require_same_shape(a, b, "psnr");
  if (a.empty()) throw InvalidInput("psnr: empty images");
  return psnr_from_sse(clamped_sse(a, b), a.size());
}

double psnr(const ImageStack& a, const ImageStack& b,
            const MetricConfig& cfg) {
  require_same_stack(a, b, "psnr");
  check_crop(a, cfg);
  const std::vector<ImagePlane> pa = prepare(a, cfg);
  const std::vector<ImagePlane> pb = prepare(b, cfg);
  double sse = 0.0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < pa.size(); ++c) {
    sse += clamped_sse(pa[c], pb[c]);
    count += pa[c].size();
  }
  return psnr_from_sse(sse, count);
}

double ssim(const ImagePlane& a, const ImagePlane& b) {
  require_same_shape(a, b, "ssim");
  if (a.height() < kWindow || a.width() < kWindow) {
    throw InvalidInput("ssim: image smaller than the 11x11 window");
  }
  const auto w = gaussian_window();
  const ImagePlane mu_a = filter_valid(a, w);
  const ImagePlane mu_b = filter_valid(b, w);
  const ImagePlane aa = filter_valid(hadamard(a, a), w);
  const ImagePlane bb = filter_valid(hadamard(b, b), w);
  const ImagePlane ab = filter_valid(hadamard(a, b), w);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double va = aa[i] - ma * ma;
    const double vb = bb[i] - mb * mb;
    const double cov = ab[i] - ma * mb;
    total += ((2.0 * ma * mb + kC1) * (2.0 * cov + kC2)) /
             ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
  }
  return total / static_cast<double>(mu_a.size());
}

double ssim(const ImageStack& a, const ImageStack& b,
            const MetricConfig& cfg) {
  require_same_stack(a, b, "ssim");
  check_crop(a, cfg);
  const std::vector<ImagePlane> pa = prepare(a, cfg);
  const std::vector<ImagePlane> pb = prepare(b, cfg);
  double total = 0.0;
  for (std::size_t c = 0; c < pa.size(); ++c) total += ssim(pa[c], pb[c]);
  return total / static_cast<double>(pa.size());
}

double lrpsnr(const ImageStack& restored_hr, const ImageStack& y,
              const DegradationOperator& op) {
  if (restored_hr.channels() != y.channels()) {
    throw InvalidInput("lrpsnr: channel counts differ");
  }
  if (!op.consistent(restored_hr.shape(), y.shape())) {
    throw InvalidInput("lrpsnr: restoration and observation shapes are "
                       "inconsistent with the operator");
  }
  std::vector<ImagePlane> degraded;
  for (const ImagePlane& p : restored_hr.planes()) {
    degraded.push_back(op.apply(p));
  }
  return psnr(ImageStack(std::move(degraded)), y);
}

ShiftedPsnr shifted_max_psnr(const ImageStack& a, const ImageStack& b,
                             int crop_size, int max_shift) {
  require_same_stack(a, b, "shifted_max_psnr");
  if (crop_size < 1 || max_shift < 0) {
    throw InvalidInput("shifted_max_psnr: crop_size >= 1 and max_shift >= 0");
  }
  const Shape s = a.shape();
  const int need = crop_size + 2 * max_shift;
  if (s.height < need || s.width < need) {
    throw InvalidInput("shifted_max_psnr: images need at least " +
                       std::to_string(need) + " pixels per side");
  }
  const int top = (s.height - crop_size) / 2;
  const int left = (s.width - crop_size) / 2;
  std::vector<ImagePlane> pa;
  for (const ImagePlane& p : a.planes()) {
    pa.push_back(clamp_unit(crop(p, top, left, crop_size, crop_size)));
  }
  ShiftedPsnr best;
  best.psnr = -std::numeric_limits<double>::infinity();
  auto score = [&](int dx, int dy) {
    double sse = 0.0;
    for (int ch = 0; ch < a.channels(); ++ch) {
      const ImagePlane& pb = b.channel(ch);
      const ImagePlane& ref = pa[ch];
      for (int r = 0; r < crop_size; ++r) {
        for (int c = 0; c < crop_size; ++c) {
          const double d =
              ref(r, c) -
              std::clamp(pb(top + r - dy, left + c - dx), 0.0, 1.0);
          sse += d * d;
        }
      }
    }
    return psnr_from_sse(
        sse, static_cast<std::size_t>(crop_size) * crop_size * a.channels());
  };
  best.psnr = score(0, 0);
  for (int dy = -max_shift; dy <= max_shift; ++dy) {
    for (int dx = -max_shift; dx <= max_shift; ++dx) {
      const double v = score(dx, dy);
      if (v > best.psnr) best = {v, dx, dy};
    }
  }
  return best;
}

}  // namespace bayesr
