#include <algorithm>
#include <cmath>

#include "bayesr/degradation.hpp"
#include "bayesr/error.hpp"
#include "bayesr/random.hpp"

namespace bayesr {

ImagePlane add_awgn(const ImagePlane& img, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InvalidInput("add_awgn: sigma must be >= 0");
  ImagePlane out = img;
  if (sigma == 0.0) return out;
  GaussianSource noise(seed);
  for (double& v : out.values()) v += sigma * noise.next();
  return out;
}

ImagePlane add_signal_noise(const ImagePlane& img, double sigma_r,
                            double sigma_s, std::uint64_t seed) {
  if (!(sigma_r >= 0.0) || !(sigma_s >= 0.0)) {
    throw InvalidInput("add_signal_noise: parameters must be >= 0");
  }
  ImagePlane out = img;
  if (sigma_r == 0.0 && sigma_s == 0.0) return out;
  const double read = sigma_r / 255.0;
  const double shot = sigma_s / 255.0;
  GaussianSource noise(seed);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double signal = std::clamp(img[i], 0.0, 1.0);
    const double std_dev =
        shot == 0.0 ? read : std::sqrt(read * read + shot * signal);
    out[i] += std_dev * noise.next();
  }
  return out;
}

namespace {

// Absorbs rounding in the statistics of flat windows; far below the variance
// of any quantized image content.
constexpr double kStatSlack = 1e-18;

PatchStats stats_of(const ImagePlane& p) { return {mean(p), variance(p)}; }

}  // namespace

bool noise_window_accepted(const ImagePlane& window) {
  if (window.height() < 2 || window.width() < 2) {
    throw InvalidInput("noise_window_accepted: window too small");
  }
  const PatchStats whole = stats_of(window);
  // The relative mean bound is meaningless for a black window.
  if (!(whole.mean > 0.0)) return false;
  const int hh = window.height() / 2;
  const int hw = window.width() / 2;
  for (int qr = 0; qr < 2; ++qr) {
    for (int qc = 0; qc < 2; ++qc) {
      const PatchStats q = stats_of(crop(window, qr * hh, qc * hw, hh, hw));
      if (std::abs(whole.mean - q.mean) > 0.05 * whole.mean + kStatSlack) {
        return false;
      }
      if (std::abs(whole.variance - q.variance) >
          0.1 * whole.variance + kStatSlack) {
        return false;
      }
    }
  }
  return true;
}

NoisePool extract_noise_patches(const std::vector<ImagePlane>& images,
                                int patch, int stride) {
  if (images.empty()) throw InvalidInput("extract_noise_patches: no images");
  if (patch < 2 || stride < 1) {
    throw InvalidInput("extract_noise_patches: patch >= 2, stride >= 1");
  }
  NoisePool pool;
  pool.patch_size = patch;
  for (const ImagePlane& img : images) {
    if (patch > img.height() || patch > img.width()) {
      throw InvalidInput("extract_noise_patches: patch larger than image");
    }
    for (int top = 0; top + patch <= img.height(); top += stride) {
      for (int left = 0; left + patch <= img.width(); left += stride) {
        ImagePlane window = crop(img, top, left, patch, patch);
        if (!noise_window_accepted(window)) continue;
        const PatchStats s = stats_of(window);
        for (double& v : window.values()) v -= s.mean;
        pool.patches.push_back(std::move(window));
        pool.stats.push_back(s);
      }
    }
  }
  return pool;
}

ImagePlane pseudo_degrade(const DegradationOperator& op,
                          const ImagePlane& clean, const NoisePool& pool,
                          std::uint64_t seed) {
  if (pool.empty()) throw InvalidInput("pseudo_degrade: empty noise pool");
  ImagePlane out = op.apply(clean);
  GaussianSource rng(seed);
  const int p = pool.patch_size;
  for (int top = 0; top < out.height(); top += p) {
    for (int left = 0; left < out.width(); left += p) {
      const ImagePlane& n = pool.patches[rng.next_u64() % pool.size()];
      for (int r = 0; r < p && top + r < out.height(); ++r) {
        for (int c = 0; c < p && left + c < out.width(); ++c) {
          out(top + r, left + c) += n(r, c);
        }
      }
    }
  }
  return out;
}

}  // namespace bayesr
