#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>

#include "bayesr/degradation.hpp"
#include "bayesr/error.hpp"

namespace bayesr {

BlurKernel::BlurKernel(int height, int width, std::vector<double> weights)
    : height_(height), width_(width), weights_(std::move(weights)) {
  if (height <= 0 || width <= 0 || height % 2 == 0 || width % 2 == 0) {
    throw InvalidInput("BlurKernel: extents must be odd and positive, got " +
                       std::to_string(height) + "x" + std::to_string(width));
  }
  if (weights_.size() != static_cast<std::size_t>(height) * width) {
    throw InvalidInput("BlurKernel: weight count does not match extents");
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (!std::isfinite(total) || std::abs(total) < 1e-12) {
    throw InvalidInput("BlurKernel: weights must have a finite nonzero sum");
  }
  for (double& w : weights_) w /= total;
}

double cubic_convolution(double x) {
  constexpr double a = -0.5;
  const double t = std::abs(x);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

namespace {

BlurKernel make_bicubic(const BicubicKernel& spec) {
  if (spec.scale < 1) throw InvalidInput("bicubic kernel: scale must be >= 1");
  const int s = spec.scale;
  const int size = 4 * s - 1;
  const int c = size / 2;
  std::vector<double> profile(size);
  for (int i = 0; i < size; ++i) {
    profile[i] = cubic_convolution(static_cast<double>(i - c) / s);
  }
  std::vector<double> weights(static_cast<std::size_t>(size) * size);
  for (int r = 0; r < size; ++r) {
    for (int col = 0; col < size; ++col) {
      weights[static_cast<std::size_t>(r) * size + col] =
          profile[r] * profile[col];
    }
  }
  return BlurKernel(size, size, std::move(weights));
}

BlurKernel make_gaussian(const GaussianKernel& spec) {
  if (spec.size <= 0 || spec.size % 2 == 0) {
    throw InvalidInput("gaussian kernel: size must be odd and positive");
  }
  if (!(spec.sigma1 > 0.0) || !(spec.sigma2 > 0.0)) {
    throw InvalidInput("gaussian kernel: sigmas must be positive");
  }
  // Covariance R diag(s1^2, s2^2) R^T, R the rotation by theta; x runs along
  // columns, y along rows.
  const double ct = std::cos(spec.theta);
  const double st = std::sin(spec.theta);
  const double v1 = spec.sigma1 * spec.sigma1;
  const double v2 = spec.sigma2 * spec.sigma2;
  const double sxx = ct * ct * v1 + st * st * v2;
  const double syy = st * st * v1 + ct * ct * v2;
  const double sxy = ct * st * (v1 - v2);
  const double det = sxx * syy - sxy * sxy;
  const double ixx = syy / det;
  const double iyy = sxx / det;
  const double ixy = -sxy / det;
  const int n = spec.size;
  const int c = n / 2;
  std::vector<double> weights(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    const double y = r - c;
    for (int col = 0; col < n; ++col) {
      const double x = col - c;
      const double q = ixx * x * x + 2.0 * ixy * x * y + iyy * y * y;
      weights[static_cast<std::size_t>(r) * n + col] = std::exp(-0.5 * q);
    }
  }
  return BlurKernel(n, n, std::move(weights));
}

}  // namespace

BlurKernel make_kernel(const KernelSpec& spec) {
  struct Visitor {
    BlurKernel operator()(const BicubicKernel& k) const {
      return make_bicubic(k);
    }
    BlurKernel operator()(const GaussianKernel& k) const {
      return make_gaussian(k);
    }
    BlurKernel operator()(const DeltaKernel&) const { return BlurKernel(); }
  };
  return std::visit(Visitor{}, spec);
}

BlurKernel read_kernel_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open kernel file " + path.string());
  int h = 0;
  int w = 0;
  if (!(in >> h >> w) || h <= 0 || w <= 0) {
    throw InvalidInput("kernel file " + path.string() + ": bad header");
  }
  std::vector<double> weights(static_cast<std::size_t>(h) * w);
  for (double& v : weights) {
    if (!(in >> v) || !std::isfinite(v)) {
      throw InvalidInput("kernel file " + path.string() +
                         ": missing or invalid weight");
    }
  }
  std::string trailing;
  if (in >> trailing) {
    throw InvalidInput("kernel file " + path.string() + ": trailing data");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 0.05) {
    throw InvalidInput("kernel file " + path.string() +
                       ": weights sum to " + std::to_string(total));
  }
  return BlurKernel(h, w, std::move(weights));
}

void write_kernel_file(const BlurKernel& kernel,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write kernel file " + path.string());
  out << kernel.height() << ' ' << kernel.width() << '\n';
  out << std::setprecision(17);
  for (int r = 0; r < kernel.height(); ++r) {
    for (int c = 0; c < kernel.width(); ++c) {
      if (c) out << ' ';
      out << kernel(r, c);
    }
    out << '\n';
  }
  if (!out) throw InvalidInput("failed writing kernel file " + path.string());
}

}  // namespace bayesr
