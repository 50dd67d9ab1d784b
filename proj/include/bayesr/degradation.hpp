#pragma once

#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

#include "bayesr/image.hpp"

namespace bayesr {

// Odd-sized 2-D blur kernel, normalized to unit sum.
class BlurKernel {
 public:
  BlurKernel() : BlurKernel(1, 1, {1.0}) {}
  // Throws InvalidInput for even or empty extents, wrong weight count, or a
  // weight sum that is not finite and nonzero. Weights are renormalized.
  BlurKernel(int height, int width, std::vector<double> weights);

  int height() const { return height_; }
  int width() const { return width_; }
  int center_row() const { return height_ / 2; }
  int center_col() const { return width_ / 2; }
  double operator()(int row, int col) const {
    return weights_[static_cast<std::size_t>(row) * width_ + col];
  }
  const std::vector<double>& weights() const { return weights_; }

 private:
  int height_;
  int width_;
  std::vector<double> weights_;
};

struct BicubicKernel {
  int scale = 2;
};
struct GaussianKernel {
  int size = 25;
  double sigma1 = 2.0;
  double sigma2 = 2.0;
  double theta = 0.0;  // radians
};
struct DeltaKernel {};
using KernelSpec = std::variant<BicubicKernel, GaussianKernel, DeltaKernel>;

// Cubic-convolution profile (a = -0.5).
double cubic_convolution(double x);

BlurKernel make_kernel(const KernelSpec& spec);

// Plain text: "H W" then H lines of W weights. The reader rejects kernels
// whose sum is off unity by more than 0.05 before renormalizing.
BlurKernel read_kernel_file(const std::filesystem::path& path);
void write_kernel_file(const BlurKernel& kernel,
                       const std::filesystem::path& path);

// Maps an HR plane to LR: convolution with the kernel under symmetric
// (half-sample) boundary extension, then keeping rows/cols 0, s, 2s, ...
class DegradationOperator {
 public:
  DegradationOperator() = default;
  DegradationOperator(BlurKernel kernel, int scale);

  const BlurKernel& kernel() const { return kernel_; }
  int scale() const { return scale_; }

  Shape output_shape(Shape hr) const;
  // True when `lr` is the output shape for `hr`.
  bool consistent(Shape hr, Shape lr) const;

  ImagePlane apply(const ImagePlane& hr) const;
  ImagePlane apply_adjoint(const ImagePlane& lr, Shape hr_shape) const;
  // Per HR pixel i: sum_j w_j A_ji^2 (diagonal of A^T diag(w) A).
  ImagePlane apply_sq_adjoint(const ImagePlane& lr_weights,
                              Shape hr_shape) const;
  // Per LR pixel j: sum_i A_ji^2 v_i.
  ImagePlane apply_sq(const ImagePlane& hr) const;

 private:
  BlurKernel kernel_;
  int scale_ = 1;
};

// Symmetric extension of index p into [0, n): ... 1 0 | 0 1 ... n-1 | n-1 ...
int reflect_index(int p, int n);

// x + eps with eps ~ N(0, sigma^2), sigma on the unit intensity scale.
ImagePlane add_awgn(const ImagePlane& img, double sigma, std::uint64_t seed);
// Signal-dependent noise N(0, sr^2 + ss * y) with sr = sigma_r / 255 and
// ss = sigma_s / 255 (parameters given on the 0-255 scale); y is the input
// clamped to [0, 1].
ImagePlane add_signal_noise(const ImagePlane& img, double sigma_r,
                            double sigma_s, std::uint64_t seed);

struct PatchStats {
  double mean = 0.0;
  double variance = 0.0;
};

struct NoisePool {
  std::vector<ImagePlane> patches;  // zero mean
  std::vector<PatchStats> stats;    // of the source window
  int patch_size = 0;

  bool empty() const { return patches.empty(); }
  std::size_t size() const { return patches.size(); }
};

// Slides a patch x patch window with the given stride over each image. A
// window y is pooled (as y - mean(y)) when mean(y) > 0 and every one of its
// four quadrants q satisfies |mean(y) - mean(q)| <= 0.05 mean(y) and
// |var(y) - var(q)| <= 0.1 var(y).
NoisePool extract_noise_patches(const std::vector<ImagePlane>& images,
                                int patch = 64, int stride = 32);
// The acceptance rule for one window, exposed for testing.
bool noise_window_accepted(const ImagePlane& window);

// A u + n where n tiles randomly drawn pool patches over the LR shape.
ImagePlane pseudo_degrade(const DegradationOperator& op,
                          const ImagePlane& clean, const NoisePool& pool,
                          std::uint64_t seed);

// Least-squares kernel from paired HR/LR planes (min sum ||A u_i - y_i||^2),
// renormalized to unit sum. Throws RankDeficiencyError when the data does not
// determine every kernel weight.
BlurKernel fit_kernel(const std::vector<ImagePlane>& hr_images,
                      const std::vector<ImagePlane>& lr_images, int scale,
                      int kernel_size);

// Cubic-convolution interpolation of `lr` onto `hr_shape`, anchored so HR
// pixel (s r, s c) coincides with LR pixel (r, c). Edge-clamped.
ImagePlane bicubic_upsample(const ImagePlane& lr, int scale, Shape hr_shape);

}  // namespace bayesr
