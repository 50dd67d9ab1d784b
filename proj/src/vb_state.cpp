#include <algorithm>
#include <cmath>
#include <string>

#include "bayesr/error.hpp"
#include "bayesr/vb_solver.hpp"

namespace bayesr {

namespace {

constexpr double kInitialVariance = 1e-4;

ImagePlane ratio(const ImagePlane& num, const ImagePlane& den) {
  ImagePlane out(num.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = num[i] / den[i];
  return out;
}

void require_positive(const ImagePlane& p, const char* name) {
  for (double v : p.values()) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidInput(std::string("VariationalState: ") + name +
                         " must be finite and strictly positive");
    }
  }
}

void require_finite(const ImagePlane& p, const char* name) {
  if (!p.all_finite()) {
    throw InvalidInput(std::string("VariationalState: ") + name +
                       " has non-finite values");
  }
}

}  // namespace

ImagePlane VariationalState::mean_rho() const {
  return ratio(alpha_rho, beta_rho);
}
ImagePlane VariationalState::mean_upsilon() const {
  return ratio(alpha_ups, beta_ups);
}
ImagePlane VariationalState::mean_omega() const {
  return ratio(alpha_om, beta_om);
}

const std::vector<StateField>& state_fields() {
  static const std::vector<StateField> fields = {
      {"mu_m", "mean", false, &VariationalState::mu_m},
      {"sigma_m2", "variance", false, &VariationalState::sigma_m2},
      {"alpha_rho", "shape", false, &VariationalState::alpha_rho},
      {"beta_rho", "rate", false, &VariationalState::beta_rho},
      {"mu_x", "mean", true, &VariationalState::mu_x},
      {"sigma_x2", "variance", true, &VariationalState::sigma_x2},
      {"alpha_ups", "shape", true, &VariationalState::alpha_ups},
      {"beta_ups", "rate", true, &VariationalState::beta_ups},
      {"mu_z", "mean", true, &VariationalState::mu_z},
      {"sigma_z2", "variance", true, &VariationalState::sigma_z2},
      {"alpha_om", "shape", true, &VariationalState::alpha_om},
      {"beta_om", "rate", true, &VariationalState::beta_om},
  };
  return fields;
}

void VariationalState::validate() const {
  const Shape lr = lr_shape();
  const Shape hr = hr_shape();
  if (lr.empty() || hr.empty()) {
    throw InvalidInput("VariationalState: empty fields");
  }
  for (const StateField& f : state_fields()) {
    const ImagePlane& p = this->*f.member;
    if (p.shape() != (f.high_resolution ? hr : lr)) {
      throw InvalidInput(std::string("VariationalState: ") + f.name +
                         " has the wrong shape");
    }
    if (std::string(f.role) == "mean") {
      require_finite(p, f.name);
    } else {
      require_positive(p, f.name);
    }
  }
}

double max_relative_change(const VariationalState& before,
                           const VariationalState& after) {
  double worst = 0.0;
  for (const StateField& f : state_fields()) {
    const ImagePlane& a = before.*f.member;
    const ImagePlane& b = after.*f.member;
    require_same_shape(a, b, "max_relative_change");
    double scale = 0.0;
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      scale = std::max(scale, std::abs(a[i]));
      diff = std::max(diff, std::abs(a[i] - b[i]));
    }
    if (diff == 0.0) continue;
    worst = std::max(worst, scale > 0.0 ? diff / scale : HUGE_VAL);
  }
  return worst;
}

VariationalState init_state(const ImagePlane& y, const DegradationOperator& op,
                            const HyperParams& hyper,
                            std::optional<Shape> hr_shape) {
  hyper.validate();
  if (y.empty()) throw InvalidInput("init_state: empty observation");
  const Shape hr = hr_shape.value_or(
      Shape{y.height() * op.scale(), y.width() * op.scale()});
  if (!op.consistent(hr, y.shape())) {
    throw InvalidInput("init_state: observation shape inconsistent with HR " +
                       std::to_string(hr.height) + "x" +
                       std::to_string(hr.width));
  }
  const Shape lr = y.shape();
  VariationalState s;
  s.mu_m = ImagePlane(lr, 0.0);
  s.sigma_m2 = ImagePlane(lr, kInitialVariance);
  s.alpha_rho = ImagePlane(lr, hyper.gamma_rho);
  s.beta_rho = ImagePlane(lr, hyper.phi_rho);
  s.mu_x = op.scale() == 1 && hr == lr
               ? y
               : bicubic_upsample(y, op.scale(), hr);
  s.sigma_x2 = ImagePlane(hr, kInitialVariance);
  s.alpha_ups = ImagePlane(hr, hyper.gamma_upsilon);
  s.beta_ups = ImagePlane(hr, hyper.phi_upsilon);
  s.mu_z = ImagePlane(hr, 0.0);
  s.sigma_z2 = ImagePlane(hr, kInitialVariance);
  s.alpha_om = ImagePlane(hr, hyper.gamma_omega);
  s.beta_om = ImagePlane(hr, hyper.phi_omega);
  return s;
}

const std::vector<UpdateStep>& default_update_order() {
  static const std::vector<UpdateStep> order = {
      UpdateStep::kNoiseMean, UpdateStep::kSparse, UpdateStep::kSmooth,
      UpdateStep::kUpsilon,   UpdateStep::kOmega,  UpdateStep::kRho};
  return order;
}

std::string to_string(UpdateStep step) {
  switch (step) {
    case UpdateStep::kNoiseMean: return "m";
    case UpdateStep::kSparse: return "z";
    case UpdateStep::kSmooth: return "x";
    case UpdateStep::kUpsilon: return "ups";
    case UpdateStep::kOmega: return "om";
    case UpdateStep::kRho: return "rho";
  }
  return "?";
}

UpdateStep parse_update_step(const std::string& name) {
  for (UpdateStep s : default_update_order()) {
    if (to_string(s) == name) return s;
  }
  throw InvalidInput("unknown update step '" + name +
                     "' (expected m, z, x, ups, om or rho)");
}

}  // namespace bayesr
