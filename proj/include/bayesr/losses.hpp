#pragma once

#include <cstdint>

#include "bayesr/degradation.hpp"
#include "bayesr/image.hpp"
#include "bayesr/priors.hpp"
#include "bayesr/vb_solver.hpp"

namespace bayesr {

// Means and standard deviations of q(x), q(z) (HR) and q(m) (LR).
struct PosteriorMoments {
  ImagePlane mu_x, sigma_x;
  ImagePlane mu_z, sigma_z;
  ImagePlane mu_m, sigma_m;

  static PosteriorMoments from_state(const VariationalState& state);
  // Throws InvalidInput on shape mismatch or negative deviations.
  void validate() const;
};

// One reparameterized sample of (x, z, m).
struct LatentDraw {
  ImagePlane x, z, m;

  // The draw with every eps = 0.
  static LatentDraw at_mean(const PosteriorMoments& moments);
};

// Posterior means of upsilon, omega and rho used as fixed loss weights.
struct AdaptiveWeights {
  ImagePlane upsilon;
  ImagePlane omega;
  ImagePlane rho;

  static AdaptiveWeights from_state(const VariationalState& state);
};

struct LossBreakdown {
  double l_y = 0.0;
  double l_mu_x = 0.0;
  double l_sigma_x = 0.0;
  double l_mu_z = 0.0;
  double l_sigma_z = 0.0;
  double l_mu_m = 0.0;
  double l_sigma_m = 0.0;
  double total = 0.0;
};

// Weights of the combined training objective L_var + tau L_self + lambda
// L_gen. Only tau is consumed here; lambda is kept for completeness.
struct TrainWeights {
  double tau = 1.0;
  double lambda = 1e-4;

  void validate() const;
};

// mean + sigma * eps with eps ~ N(0, I) from the given seed.
ImagePlane reparam_draw(const ImagePlane& mean, const ImagePlane& sigma,
                        std::uint64_t seed);

// x, z and m from one stream in that order, each with independent eps.
LatentDraw draw_latents(const PosteriorMoments& moments, std::uint64_t seed);

// mu_ups = (2 g + 1) / ((D_h mu_x)^2 + (D_v mu_x)^2 + 4 sigma_x^2 + 2 phi)
// mu_om  = (2 g + 1) / (mu_z^2 + sigma_z^2 + 2 phi)
// mu_rho = (2 g + 1) / ((y - A(x + z) - m)^2 + 2 phi), at the sampled draw.
AdaptiveWeights adaptive_weights(const PosteriorMoments& moments,
                                 const LatentDraw& draw, const ImagePlane& y,
                                 const DegradationOperator& op,
                                 const HyperParams& hyper);

// Draws one sample, derives the adaptive weights from it and evaluates the
// seven loss terms. The weights are constants of the evaluation: nothing
// downstream should differentiate through them.
LossBreakdown variational_loss(const ImagePlane& y,
                               const DegradationOperator& op,
                               const HyperParams& hyper,
                               const PosteriorMoments& moments,
                               std::uint64_t seed);

// Same terms for a caller-supplied draw and weights.
LossBreakdown variational_loss(const ImagePlane& y,
                               const DegradationOperator& op,
                               const HyperParams& hyper,
                               const PosteriorMoments& moments,
                               const LatentDraw& draw,
                               const AdaptiveWeights& weights);

// sum |u - r|^p with p = 2 when scale == 1 and p = 1 otherwise.
double self_loss(const ImagePlane& restoration, const ImagePlane& reference,
                 int scale);

}  // namespace bayesr
