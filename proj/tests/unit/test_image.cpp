#include <gtest/gtest.h>

#include <random>

#include "bayesr/error.hpp"
#include "bayesr/image.hpp"
#include "dense_model.hpp"
#include "fixtures.hpp"

using namespace bayesr;

TEST(FiniteDifference, ConstantPlaneHasZeroGradient) {
  const ImagePlane c(5, 7, 0.3);
  for (Axis a : {Axis::kHorizontal, Axis::kVertical}) {
    EXPECT_EQ(finite_difference(c, a), ImagePlane(5, 7, 0.0));
  }
}

TEST(FiniteDifference, RowExample) {
  const ImagePlane row(1, 3, {0.0, 1.0, 3.0});
  EXPECT_EQ(finite_difference(row, Axis::kHorizontal).vector(),
            (std::vector<double>{1.0, 2.0, 0.0}));
  EXPECT_EQ(finite_difference(row, Axis::kVertical), ImagePlane(1, 3, 0.0));
}

TEST(FiniteDifference, AdjointRowExample) {
  const ImagePlane in(1, 3, {1.0, 2.0, 0.0});
  EXPECT_EQ(finite_difference_adjoint(in, Axis::kHorizontal).vector(),
            (std::vector<double>{-1.0, -1.0, 2.0}));
  EXPECT_EQ(finite_difference_adjoint(ImagePlane(3, 4), Axis::kVertical),
            ImagePlane(3, 4, 0.0));
}

TEST(FiniteDifference, AdjointIdentityOnRandomPairs) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 12);
  for (int t = 0; t < 20; ++t) {
    const Shape s{dim(rng), dim(rng)};
    const ImagePlane x = fixtures::random_plane(s, rng, -1, 1);
    const ImagePlane w = fixtures::random_plane(s, rng, -1, 1);
    for (Axis a : {Axis::kHorizontal, Axis::kVertical}) {
      EXPECT_NEAR(dot(finite_difference(x, a), w),
                  dot(x, finite_difference_adjoint(w, a)), 1e-12);
    }
  }
}

TEST(FiniteDifference, MatchesMaterializedMatrix) {
  std::mt19937_64 rng(3);
  const Shape s{4, 6};
  const ImagePlane x = fixtures::random_plane(s, rng);
  const Eigen::VectorXd dh = oracle::difference_matrix(s, true) * oracle::vec(x);
  const Eigen::VectorXd dv = oracle::difference_matrix(s, false) * oracle::vec(x);
  const ImagePlane h = finite_difference(x, Axis::kHorizontal);
  const ImagePlane v = finite_difference(x, Axis::kVertical);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_NEAR(h[i], dh[i], 1e-15);
    EXPECT_NEAR(v[i], dv[i], 1e-15);
  }
}

TEST(DifferenceGram, DiagonalAndRowEnergyMatchDense) {
  std::mt19937_64 rng(11);
  const Shape s{5, 4};
  const ImagePlane w = fixtures::random_plane(s, rng, 0.1, 2.0);
  const auto Dh = oracle::difference_matrix(s, true);
  const auto Dv = oracle::difference_matrix(s, false);
  const Eigen::VectorXd wv = oracle::vec(w);
  const Eigen::MatrixXd G = Dh.transpose() * wv.asDiagonal() * Dh +
                            Dv.transpose() * wv.asDiagonal() * Dv;
  const Eigen::VectorXd energy =
      (Dh.cwiseAbs2() + Dv.cwiseAbs2()) * wv;
  const ImagePlane g = difference_gram_diagonal(w);
  const ImagePlane e = difference_row_energy(w);
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_NEAR(g[i], G(i, i), 1e-14);
    EXPECT_NEAR(e[i], energy[i], 1e-14);
  }
}

TEST(WeightedNorm, Examples) {
  EXPECT_DOUBLE_EQ(weighted_sq_norm(ImagePlane(1, 2, {1.0, 2.0}),
                                    ImagePlane(1, 2, {3.0, 0.5})),
                   5.0);
  const ImagePlane v(2, 2, {1.0, -2.0, 3.0, 0.5});
  EXPECT_DOUBLE_EQ(weighted_sq_norm(v, ImagePlane(2, 2, 1.0)), dot(v, v));
  EXPECT_EQ(weighted_sq_norm(ImagePlane(2, 2), ImagePlane(2, 2, 4.0)), 0.0);
}

TEST(WeightedNorm, RejectsBadWeights) {
  EXPECT_THROW(weighted_sq_norm(ImagePlane(1, 2), ImagePlane(2, 1, 1.0)),
               InvalidInput);
  EXPECT_THROW(
      weighted_sq_norm(ImagePlane(1, 2), ImagePlane(1, 2, {1.0, -1.0})),
      InvalidInput);
}

TEST(ImagePlane, ConstructionChecks) {
  EXPECT_THROW(ImagePlane(2, 2, std::vector<double>{1.0}), InvalidInput);
  EXPECT_THROW(ImagePlane(1, 1, std::vector<double>{std::nan("")}),
               InvalidInput);
  const ImagePlane p(2, 3, 1.5);
  EXPECT_EQ(p.size(), 6u);
  EXPECT_DOUBLE_EQ(sum(p), 9.0);
  EXPECT_DOUBLE_EQ(mean(p), 1.5);
  EXPECT_DOUBLE_EQ(variance(p), 0.0);
}

TEST(ImagePlane, CropAndClamp) {
  ImagePlane p(3, 3);
  for (int i = 0; i < 9; ++i) p[i] = i * 0.25 - 0.5;
  const ImagePlane c = crop(p, 1, 1, 2, 2);
  EXPECT_EQ(c.vector(), (std::vector<double>{0.5, 0.75, 1.25, 1.5}));
  const ImagePlane u = clamp_unit(p);
  EXPECT_EQ(u[0], 0.0);
  EXPECT_EQ(u[8], 1.0);
  EXPECT_THROW(crop(p, 2, 2, 2, 2), InvalidInput);
}

TEST(ImageStack, RejectsMismatchedChannels) {
  EXPECT_THROW(ImageStack({ImagePlane(2, 2), ImagePlane(2, 3)}),
               InvalidInput);
  EXPECT_THROW(ImageStack({ImagePlane(2, 2), ImagePlane(2, 2)}),
               InvalidInput);
  EXPECT_EQ(ImageStack(ImagePlane(4, 5)).shape(), (Shape{4, 5}));
}
