#include <cmath>
#include <numbers>
#include <utility>

#include "bayesr/error.hpp"
#include "bayesr/vb_solver.hpp"

namespace bayesr {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

// sum_i E[log v_i] under G(v_i | beta_i, alpha_i).
double sum_expected_log(const ImagePlane& alpha, const ImagePlane& beta) {
  double acc = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    acc += digamma(alpha[i]) - std::log(beta[i]);
  }
  return acc;
}

// E[log p(v)] for a G(phi, gamma) prior shared by every element.
double gamma_prior_term(const ImagePlane& alpha, const ImagePlane& beta,
                        double phi, double gamma) {
  const double norm = gamma * std::log(phi) - lgamma(gamma);
  double acc = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double e_log = digamma(alpha[i]) - std::log(beta[i]);
    acc += norm + (gamma - 1.0) * e_log - phi * alpha[i] / beta[i];
  }
  return acc;
}

// Negative entropy of a product of Gamma factors.
double gamma_log_q(const ImagePlane& alpha, const ImagePlane& beta) {
  double acc = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double a = alpha[i];
    acc += -a + std::log(beta[i]) - lgamma(a) + (a - 1.0) * digamma(a);
  }
  return acc;
}

// Negative entropy of a diagonal Gaussian.
double gaussian_log_q(const ImagePlane& var) {
  double log_det = 0.0;
  for (double v : var.values()) log_det += std::log(v);
  return -0.5 * static_cast<double>(var.size()) * (kLog2Pi + 1.0) -
         0.5 * log_det;
}

}  // namespace

double EvidenceTerms::total() const {
  const double log_q = log_q_x + log_q_upsilon + log_q_z + log_q_omega +
                       log_q_m + log_q_rho;
  const double log_p = log_lik_y + log_p_x + log_p_upsilon + log_p_z +
                       log_p_omega + log_p_m + log_p_rho;
  return log_q - log_p;
}

EvidenceTerms evidence_terms(const VariationalState& state,
                             const ImagePlane& y,
                             const DegradationOperator& op,
                             const HyperParams& hyper) {
  if (y.shape() != state.lr_shape() ||
      !op.consistent(state.hr_shape(), y.shape())) {
    throw InvalidInput("evidence_bound: observation and state disagree");
  }
  const Shape hr = state.hr_shape();
  const double d_y = static_cast<double>(y.size());
  const double d_u = static_cast<double>(hr.size());
  const ImagePlane rho = state.mean_rho();
  const ImagePlane ups = state.mean_upsilon();
  const ImagePlane om = state.mean_omega();

  EvidenceTerms t;

  const ImagePlane residual =
      y - op.apply(state.mu_x + state.mu_z) - state.mu_m;
  const ImagePlane rho_hr = op.apply_sq_adjoint(rho, hr);
  t.log_lik_y = -0.5 * d_y * kLog2Pi +
                0.5 * sum_expected_log(state.alpha_rho, state.beta_rho) -
                0.5 * weighted_sq_norm(residual, rho) -
                0.5 * (dot(rho_hr, state.sigma_x2 + state.sigma_z2) +
                       dot(rho, state.sigma_m2));

  const ImagePlane dh = finite_difference(state.mu_x, Axis::kHorizontal);
  const ImagePlane dv = finite_difference(state.mu_x, Axis::kVertical);
  t.log_p_x = -0.5 * d_u * kLog2Pi +
              0.5 * sum_expected_log(state.alpha_ups, state.beta_ups) -
              0.5 * (weighted_sq_norm(dh, ups) + weighted_sq_norm(dv, ups)) -
              0.5 * dot(difference_gram_diagonal(ups), state.sigma_x2);
  t.log_p_upsilon = gamma_prior_term(state.alpha_ups, state.beta_ups,
                                     hyper.phi_upsilon, hyper.gamma_upsilon);

  t.log_p_z = -0.5 * d_u * kLog2Pi +
              0.5 * sum_expected_log(state.alpha_om, state.beta_om) -
              0.5 * (weighted_sq_norm(state.mu_z, om) +
                     dot(om, state.sigma_z2));
  t.log_p_omega = gamma_prior_term(state.alpha_om, state.beta_om,
                                   hyper.phi_omega, hyper.gamma_omega);

  double m_dev = 0.0;
  for (double v : state.mu_m.values()) {
    m_dev += (v - hyper.mu0) * (v - hyper.mu0);
  }
  t.log_p_m = -0.5 * d_y * kLog2Pi + 0.5 * d_y * std::log(hyper.sigma0) -
              0.5 * hyper.sigma0 * (m_dev + sum(state.sigma_m2));
  t.log_p_rho = gamma_prior_term(state.alpha_rho, state.beta_rho,
                                 hyper.phi_rho, hyper.gamma_rho);

  t.log_q_x = gaussian_log_q(state.sigma_x2);
  t.log_q_upsilon = gamma_log_q(state.alpha_ups, state.beta_ups);
  t.log_q_z = gaussian_log_q(state.sigma_z2);
  t.log_q_omega = gamma_log_q(state.alpha_om, state.beta_om);
  t.log_q_m = gaussian_log_q(state.sigma_m2);
  t.log_q_rho = gamma_log_q(state.alpha_rho, state.beta_rho);

  const std::pair<const char*, double> named[] = {
      {"log_lik_y", t.log_lik_y},       {"log_p_x", t.log_p_x},
      {"log_p_upsilon", t.log_p_upsilon}, {"log_p_z", t.log_p_z},
      {"log_p_omega", t.log_p_omega},   {"log_p_m", t.log_p_m},
      {"log_p_rho", t.log_p_rho},       {"log_q_x", t.log_q_x},
      {"log_q_upsilon", t.log_q_upsilon}, {"log_q_z", t.log_q_z},
      {"log_q_omega", t.log_q_omega},   {"log_q_m", t.log_q_m},
      {"log_q_rho", t.log_q_rho},
  };
  for (const auto& [name, value] : named) {
    if (!std::isfinite(value)) {
      throw NumericalError("evidence_bound: non-finite term", name);
    }
  }
  return t;
}

double evidence_bound(const VariationalState& state, const ImagePlane& y,
                      const DegradationOperator& op,
                      const HyperParams& hyper) {
  const double total = evidence_terms(state, y, op, hyper).total();
  if (!std::isfinite(total)) {
    throw NumericalError("evidence_bound: non-finite total", "total");
  }
  return total;
}

}  // namespace bayesr
