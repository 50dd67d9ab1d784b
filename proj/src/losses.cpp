#include <cmath>
#include <string>
#include <utility>

#include "bayesr/error.hpp"
#include "bayesr/losses.hpp"
#include "bayesr/random.hpp"

namespace bayesr {

namespace {

ImagePlane sqrt_of(const ImagePlane& v) {
  ImagePlane out(v.shape());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::sqrt(v[i]);
  return out;
}

void check_sigma(const ImagePlane& mean, const ImagePlane& sigma,
                 const char* name) {
  require_same_shape(mean, sigma, name);
  for (double s : sigma.values()) {
    if (!(s >= 0.0)) {
      throw InvalidInput(std::string(name) + ": standard deviation < 0");
    }
  }
}

double sum_log_sq(const ImagePlane& sigma) {
  double acc = 0.0;
  for (double s : sigma.values()) acc += std::log(s * s);
  return acc;
}

}  // namespace

PosteriorMoments PosteriorMoments::from_state(const VariationalState& s) {
  return {s.mu_x, sqrt_of(s.sigma_x2), s.mu_z, sqrt_of(s.sigma_z2),
          s.mu_m, sqrt_of(s.sigma_m2)};
}

void PosteriorMoments::validate() const {
  check_sigma(mu_x, sigma_x, "moments x");
  check_sigma(mu_z, sigma_z, "moments z");
  check_sigma(mu_m, sigma_m, "moments m");
  require_same_shape(mu_x, mu_z, "moments x/z");
}

LatentDraw LatentDraw::at_mean(const PosteriorMoments& m) {
  return {m.mu_x, m.mu_z, m.mu_m};
}

AdaptiveWeights AdaptiveWeights::from_state(const VariationalState& s) {
  return {s.mean_upsilon(), s.mean_omega(), s.mean_rho()};
}

void TrainWeights::validate() const {
  if (!(tau >= 0.0) || !(lambda >= 0.0)) {
    throw InvalidInput("TrainWeights: tau and lambda must be >= 0");
  }
}

ImagePlane reparam_draw(const ImagePlane& mean, const ImagePlane& sigma,
                        std::uint64_t seed) {
  check_sigma(mean, sigma, "reparam_draw");
  GaussianSource eps(seed);
  ImagePlane out = mean;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += sigma[i] * eps.next();
  return out;
}

LatentDraw draw_latents(const PosteriorMoments& m, std::uint64_t seed) {
  m.validate();
  GaussianSource eps(seed);
  auto draw = [&eps](const ImagePlane& mean, const ImagePlane& sigma) {
    ImagePlane out = mean;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] += sigma[i] * eps.next();
    }
    return out;
  };
  LatentDraw d;
  d.x = draw(m.mu_x, m.sigma_x);
  d.z = draw(m.mu_z, m.sigma_z);
  d.m = draw(m.mu_m, m.sigma_m);
  return d;
}

AdaptiveWeights adaptive_weights(const PosteriorMoments& moments,
                                 const LatentDraw& draw, const ImagePlane& y,
                                 const DegradationOperator& op,
                                 const HyperParams& hyper) {
  moments.validate();
  hyper.validate();
  require_same_shape(draw.m, y, "adaptive_weights");
  if (!op.consistent(moments.mu_x.shape(), y.shape())) {
    throw InvalidInput("adaptive_weights: shapes inconsistent with operator");
  }
  AdaptiveWeights w;
  const ImagePlane dh = finite_difference(moments.mu_x, Axis::kHorizontal);
  const ImagePlane dv = finite_difference(moments.mu_x, Axis::kVertical);
  w.upsilon = ImagePlane(moments.mu_x.shape());
  for (std::size_t i = 0; i < dh.size(); ++i) {
    const double sx = moments.sigma_x[i];
    w.upsilon[i] = (2.0 * hyper.gamma_upsilon + 1.0) /
                   (dh[i] * dh[i] + dv[i] * dv[i] + 4.0 * sx * sx +
                    2.0 * hyper.phi_upsilon);
  }
  w.omega = ImagePlane(moments.mu_z.shape());
  for (std::size_t i = 0; i < w.omega.size(); ++i) {
    const double mz = moments.mu_z[i];
    const double sz = moments.sigma_z[i];
    w.omega[i] = (2.0 * hyper.gamma_omega + 1.0) /
                 (mz * mz + sz * sz + 2.0 * hyper.phi_omega);
  }
  const ImagePlane residual = y - op.apply(draw.x + draw.z) - draw.m;
  w.rho = ImagePlane(y.shape());
  for (std::size_t i = 0; i < y.size(); ++i) {
    w.rho[i] = (2.0 * hyper.gamma_rho + 1.0) /
               (residual[i] * residual[i] + 2.0 * hyper.phi_rho);
  }
  return w;
}

LossBreakdown variational_loss(const ImagePlane& y,
                               const DegradationOperator& op,
                               const HyperParams& hyper,
                               const PosteriorMoments& moments,
                               std::uint64_t seed) {
  const LatentDraw draw = draw_latents(moments, seed);
  const AdaptiveWeights weights =
      adaptive_weights(moments, draw, y, op, hyper);
  return variational_loss(y, op, hyper, moments, draw, weights);
}

LossBreakdown variational_loss(const ImagePlane& y,
                               const DegradationOperator& op,
                               const HyperParams& hyper,
                               const PosteriorMoments& moments,
                               const LatentDraw& draw,
                               const AdaptiveWeights& weights) {
  moments.validate();
  hyper.validate();
  require_same_shape(draw.x, moments.mu_x, "variational_loss draw x");
  require_same_shape(draw.z, moments.mu_z, "variational_loss draw z");
  require_same_shape(draw.m, y, "variational_loss draw m");
  require_same_shape(weights.upsilon, moments.mu_x, "variational_loss ups");
  require_same_shape(weights.omega, moments.mu_z, "variational_loss om");
  require_same_shape(weights.rho, y, "variational_loss rho");

  LossBreakdown l;
  const ImagePlane residual = y - op.apply(draw.x + draw.z) - draw.m;
  l.l_y = 0.5 * weighted_sq_norm(residual, weights.rho);

  const ImagePlane dh = finite_difference(moments.mu_x, Axis::kHorizontal);
  const ImagePlane dv = finite_difference(moments.mu_x, Axis::kVertical);
  l.l_mu_x = 0.5 * (weighted_sq_norm(dh, weights.upsilon) +
                    weighted_sq_norm(dv, weights.upsilon));
  l.l_sigma_x =
      0.5 * (4.0 * weighted_sq_norm(moments.sigma_x, weights.upsilon) -
             sum_log_sq(moments.sigma_x));

  l.l_mu_z = 0.5 * weighted_sq_norm(moments.mu_z, weights.omega);
  l.l_sigma_z = 0.5 * (weighted_sq_norm(moments.sigma_z, weights.omega) -
                       sum_log_sq(moments.sigma_z));

  double m_dev = 0.0;
  double m_var = 0.0;
  for (std::size_t i = 0; i < moments.mu_m.size(); ++i) {
    const double d = moments.mu_m[i] - hyper.mu0;
    m_dev += d * d;
    m_var += moments.sigma_m[i] * moments.sigma_m[i];
  }
  l.l_mu_m = 0.5 * hyper.sigma0 * m_dev;
  l.l_sigma_m = 0.5 * (hyper.sigma0 * m_var - sum_log_sq(moments.sigma_m));

  const std::pair<const char*, double> named[] = {
      {"l_y", l.l_y},         {"l_mu_x", l.l_mu_x}, {"l_sigma_x", l.l_sigma_x},
      {"l_mu_z", l.l_mu_z},   {"l_sigma_z", l.l_sigma_z},
      {"l_mu_m", l.l_mu_m},   {"l_sigma_m", l.l_sigma_m},
  };
  for (const auto& [name, value] : named) {
    if (!std::isfinite(value)) {
      throw NumericalError("variational_loss: non-finite term", name);
    }
  }
  l.total = l.l_y + l.l_mu_x + l.l_sigma_x + l.l_mu_z + l.l_sigma_z +
            l.l_mu_m + l.l_sigma_m;
  return l;
}

double self_loss(const ImagePlane& restoration, const ImagePlane& reference,
                 int scale) {
  require_same_shape(restoration, reference, "self_loss");
  if (scale < 1) throw InvalidInput("self_loss: scale must be >= 1");
  double acc = 0.0;
  for (std::size_t i = 0; i < restoration.size(); ++i) {
    const double d = restoration[i] - reference[i];
    acc += scale == 1 ? d * d : std::abs(d);
  }
  return acc;
}

}  // namespace bayesr
