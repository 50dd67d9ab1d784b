#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <unistd.h>

#include "bayesr/degradation.hpp"
#include "bayesr/image.hpp"

namespace fixtures {

inline bayesr::ImagePlane random_plane(bayesr::Shape shape,
                                       std::mt19937_64& rng, double lo = 0.0,
                                       double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  bayesr::ImagePlane p(shape);
  for (double& v : p.values()) v = u(rng);
  return p;
}

// Strictly positive weights, so the kernel always normalizes.
inline bayesr::BlurKernel random_kernel(int height, int width,
                                        std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(static_cast<std::size_t>(height) * width);
  for (double& v : w) v = u(rng);
  return bayesr::BlurKernel(height, width, std::move(w));
}

// A 0.2 background with two overlapping rectangles at 0.8 and 0.5.
inline bayesr::ImagePlane piecewise_constant(int n) {
  bayesr::ImagePlane p(n, n, 0.2);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (r > n / 3 && c > n / 6 && c < 2 * n / 3) p(r, c) = 0.8;
      if (r > n / 8 && r < n / 2 && c > n / 2 && c < 7 * n / 8) p(r, c) = 0.5;
    }
  }
  return p;
}

// Background plus four axis-aligned blocks with random extents and levels.
inline bayesr::ImagePlane random_blocks(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> level(0.1, 0.9);
  std::uniform_int_distribution<int> pos(0, n - 1);
  bayesr::ImagePlane p(n, n, level(rng));
  for (int b = 0; b < 4; ++b) {
    int r0 = pos(rng), r1 = pos(rng), c0 = pos(rng), c1 = pos(rng);
    if (r0 > r1) std::swap(r0, r1);
    if (c0 > c1) std::swap(c0, c1);
    const double v = level(rng);
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) p(r, c) = v;
    }
  }
  return p;
}

inline std::filesystem::path fresh_dir(const std::string& tag) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      ("bayesr_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
