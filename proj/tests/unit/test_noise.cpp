#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bayesr/degradation.hpp"
#include "bayesr/error.hpp"
#include "bayesr/random.hpp"
#include "fixtures.hpp"

using namespace bayesr;

namespace {

// 8x8 window built from four 4x4 quadrants, each a +-amp checkerboard around
// its own level. Quadrant order: top-left, top-right, bottom-left,
// bottom-right.
ImagePlane quadrant_window(const double level[4], const double amp[4]) {
  ImagePlane w(8, 8);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      const int q = (r / 4) * 2 + c / 4;
      const double sign = (r + c) % 2 == 0 ? 1.0 : -1.0;
      w(r, c) = level[q] + sign * amp[q];
    }
  }
  return w;
}

double sample_variance(const ImagePlane& a, const ImagePlane& b) {
  return variance(a - b);
}

}  // namespace

TEST(Awgn, ZeroSigmaAndDeterminism) {
  std::mt19937_64 rng(1);
  const ImagePlane img = fixtures::random_plane({16, 16}, rng);
  EXPECT_EQ(add_awgn(img, 0.0, 3), img);
  EXPECT_EQ(add_awgn(img, 0.1, 3), add_awgn(img, 0.1, 3));
  EXPECT_NE(add_awgn(img, 0.1, 3), add_awgn(img, 0.1, 4));
  EXPECT_THROW(add_awgn(img, -0.1, 3), InvalidInput);
}

TEST(Awgn, EmpiricalVariance) {
  const ImagePlane img(512, 512, 0.4);
  const double sigma = 20.0 / 255.0;
  const double v = sample_variance(add_awgn(img, sigma, 17), img);
  EXPECT_NEAR(v / (sigma * sigma), 1.0, 0.05);
}

TEST(SignalNoise, IdentityAndDegeneracy) {
  std::mt19937_64 rng(2);
  const ImagePlane img = fixtures::random_plane({12, 9}, rng);
  EXPECT_EQ(add_signal_noise(img, 0.0, 0.0, 5), img);
  EXPECT_EQ(add_signal_noise(img, 7.0, 0.0, 5), add_awgn(img, 7.0 / 255.0, 5));
}

TEST(SignalNoise, EmpiricalVarianceOnConstantImage) {
  const ImagePlane img(512, 512, 0.5);
  const double sr = 10.0 / 255.0;
  const double ss = 2.0 / 255.0;
  const double v = sample_variance(add_signal_noise(img, 10.0, 2.0, 21), img);
  EXPECT_NEAR(v / (sr * sr + 0.5 * ss), 1.0, 0.05);
}

TEST(NoiseRule, FlatImageAcceptedWithZeroPatches) {
  const NoisePool pool =
      extract_noise_patches({ImagePlane(16, 16, 0.3)}, 8, 4);
  ASSERT_EQ(pool.size(), 9u);
  for (const ImagePlane& p : pool.patches) {
    for (double v : p.values()) EXPECT_NEAR(v, 0.0, 1e-15);
  }
  EXPECT_NEAR(pool.stats[0].mean, 0.3, 1e-15);
}

TEST(NoiseRule, HalfContrastWindowRejected) {
  // Left half black, right half white: window variance 0.25, every quadrant
  // variance 0.
  ImagePlane w(8, 8, 0.0);
  for (int r = 0; r < 8; ++r) {
    for (int c = 4; c < 8; ++c) w(r, c) = 1.0;
  }
  EXPECT_NEAR(variance(w), 0.25, 1e-15);
  EXPECT_FALSE(noise_window_accepted(w));
  // Entirely inside the black half there is no positive mean to compare.
  EXPECT_FALSE(noise_window_accepted(ImagePlane(8, 8, 0.0)));
}

TEST(NoiseRule, MeanBoundIsFivePercent) {
  // One quadrant offset by d: worst deviation 3d/4 against 0.05 (m + d/4),
  // so the limit with m = 0.5 is d = 0.025 / 0.7375 ~ 0.0339.
  const double amp[4] = {0.1, 0.1, 0.1, 0.1};
  const double inside[4] = {0.5, 0.5, 0.5, 0.533};
  const double outside[4] = {0.5, 0.5, 0.5, 0.535};
  EXPECT_TRUE(noise_window_accepted(quadrant_window(inside, amp)));
  EXPECT_FALSE(noise_window_accepted(quadrant_window(outside, amp)));
}

TEST(NoiseRule, VarianceBoundIsTenPercent) {
  // One quadrant with variance f^2 against e^2 elsewhere: the limit is
  // f^2 / e^2 = 3.3 / 2.9 ~ 1.138.
  const double level[4] = {0.5, 0.5, 0.5, 0.5};
  const double e = 0.1;
  const double inside[4] = {e, e, e, e * std::sqrt(1.12)};
  const double outside[4] = {e, e, e, e * std::sqrt(1.16)};
  EXPECT_TRUE(noise_window_accepted(quadrant_window(level, inside)));
  EXPECT_FALSE(noise_window_accepted(quadrant_window(level, outside)));
}

TEST(NoisePoolTest, StoredPatchesAreZeroMean) {
  const ImagePlane img = add_awgn(ImagePlane(96, 96, 0.5), 0.05, 9);
  const NoisePool pool = extract_noise_patches({img}, 16, 8);
  ASSERT_FALSE(pool.empty());
  for (const ImagePlane& p : pool.patches) {
    EXPECT_EQ(p.shape(), (Shape{16, 16}));
    EXPECT_NEAR(mean(p), 0.0, 1e-9);
  }
  EXPECT_THROW(extract_noise_patches({img}, 128, 8), InvalidInput);
  EXPECT_THROW(extract_noise_patches({}, 16, 8), InvalidInput);
}

TEST(PseudoDegrade, AddsTiledPoolPatches) {
  std::mt19937_64 rng(3);
  const ImagePlane patch = [&] {
    ImagePlane p = fixtures::random_plane({4, 4}, rng, -0.1, 0.1);
    const double m = mean(p);
    for (double& v : p.values()) v -= m;
    return p;
  }();
  NoisePool pool;
  pool.patch_size = 4;
  pool.patches = {patch};
  pool.stats = {{0.5, 0.01}};
  const DegradationOperator op(make_kernel(BicubicKernel{2}), 2);
  const ImagePlane clean = fixtures::random_plane({20, 18}, rng);
  const ImagePlane out = pseudo_degrade(op, clean, pool, 1);
  const ImagePlane noise = out - op.apply(clean);
  for (int r = 0; r < noise.height(); ++r) {
    for (int c = 0; c < noise.width(); ++c) {
      EXPECT_NEAR(noise(r, c), patch(r % 4, c % 4), 1e-15);
    }
  }
  pool.patches.push_back(patch * -1.0);
  pool.stats.push_back(pool.stats[0]);
  EXPECT_EQ(pseudo_degrade(op, clean, pool, 8), pseudo_degrade(op, clean, pool, 8));
  EXPECT_THROW(pseudo_degrade(op, clean, NoisePool{}, 1), InvalidInput);
}

TEST(Random, GaussianSourceMoments) {
  GaussianSource g(42);
  const ImagePlane z = g.standard_normal({300, 300});
  EXPECT_NEAR(mean(z), 0.0, 0.01);
  EXPECT_NEAR(variance(z), 1.0, 0.02);
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(5, 2), derive_seed(5, 2));
}
