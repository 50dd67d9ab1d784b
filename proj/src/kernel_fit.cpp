#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "bayesr/degradation.hpp"
#include "bayesr/error.hpp"

namespace bayesr {

namespace {

// Relative eigenvalue floor of the normal matrix below which a kernel
// direction is treated as unidentified.
constexpr double kRankTolerance = 1e-11;

}  // namespace

BlurKernel fit_kernel(const std::vector<ImagePlane>& hr_images,
                      const std::vector<ImagePlane>& lr_images, int scale,
                      int kernel_size) {
  if (hr_images.empty() || hr_images.size() != lr_images.size()) {
    throw InvalidInput("fit_kernel: need equally many HR and LR images");
  }
  if (scale < 1) throw InvalidInput("fit_kernel: scale must be >= 1");
  if (kernel_size <= 0 || kernel_size % 2 == 0) {
    throw InvalidInput("fit_kernel: kernel size must be odd and positive");
  }
  const int n = kernel_size * kernel_size;
  const int center = kernel_size / 2;
  const DegradationOperator shape_probe(BlurKernel(), scale);

  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd features(n);
  long equations = 0;
  for (std::size_t k = 0; k < hr_images.size(); ++k) {
    const ImagePlane& hr = hr_images[k];
    const ImagePlane& lr = lr_images[k];
    if (!shape_probe.consistent(hr.shape(), lr.shape())) {
      throw InvalidInput("fit_kernel: pair " + std::to_string(k) +
                         " has inconsistent shapes for scale " +
                         std::to_string(scale));
    }
    for (int r = 0; r < lr.height(); ++r) {
      for (int c = 0; c < lr.width(); ++c) {
        for (int a = 0; a < kernel_size; ++a) {
          const int src_r = reflect_index(r * scale - (a - center), hr.height());
          for (int b = 0; b < kernel_size; ++b) {
            const int src_c =
                reflect_index(c * scale - (b - center), hr.width());
            features[a * kernel_size + b] = hr(src_r, src_c);
          }
        }
        normal.selfadjointView<Eigen::Lower>().rankUpdate(features);
        rhs += lr(r, c) * features;
        ++equations;
      }
    }
  }
  if (equations < n) {
    throw RankDeficiencyError("fit_kernel: " + std::to_string(equations) +
                              " equations for " + std::to_string(n) +
                              " kernel weights");
  }
  normal = normal.selfadjointView<Eigen::Lower>();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal,
                                                     Eigen::EigenvaluesOnly);
  const double largest = eig.eigenvalues().maxCoeff();
  const double smallest = eig.eigenvalues().minCoeff();
  if (!(largest > 0.0) || smallest <= kRankTolerance * largest) {
    throw RankDeficiencyError("fit_kernel: normal equations are singular");
  }

  const Eigen::LLT<Eigen::MatrixXd> llt(normal);
  Eigen::VectorXd solution = llt.solve(rhs);
  // One step of iterative refinement against the assembled system.
  solution += llt.solve(rhs - normal * solution);
  if (!solution.allFinite()) {
    throw NumericalError("fit_kernel: non-finite solution");
  }
  return BlurKernel(kernel_size, kernel_size,
                    std::vector<double>(solution.data(), solution.data() + n));
}

}  // namespace bayesr
