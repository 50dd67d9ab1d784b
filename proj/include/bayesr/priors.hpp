#pragma once

#include <functional>

namespace bayesr {

// Constants of the hierarchical prior. Gamma factors are written G(x|rate,
// shape) with density rate^shape / Gamma(shape) x^(shape-1) exp(-rate x).
struct HyperParams {
  double gamma_upsilon = 2.0;
  double gamma_omega = 2.0;
  double gamma_rho = 2.0;
  double phi_upsilon = 1e-3;
  double phi_omega = 1e-3;
  double phi_rho = 1e-5;
  double mu0 = 0.0;
  double sigma0 = 1e3;

  // Unsupervised / pseudo-supervised defaults (phi_rho = 1e-5).
  static HyperParams unsupervised() { return {}; }
  // Supervised defaults (phi_rho = 1e-3).
  static HyperParams supervised() {
    HyperParams h;
    h.phi_rho = 1e-3;
    return h;
  }

  // Throws InvalidInput unless every shape, rate and precision is positive.
  void validate() const;
};

struct GammaParams {
  double shape = 1.0;
  double rate = 1.0;

  double mean() const { return shape / rate; }
};

double lgamma(double x);
double digamma(double x);

double log_normal_pdf(double z, double mean, double precision);
double log_gamma_pdf(double x, double rate, double shape);
// S(z | mu, lam, alpha): location mu, precision-like lam, alpha degrees of
// freedom.
double student_t_logpdf(double z, double mu, double lam, double alpha);

// Closed-form log density of the Normal-Gamma marginal
// int N(z | mu, 1/w) G(w | phi, gamma) dw = S(z | mu, gamma / phi, 2 gamma).
double normal_gamma_marginal_logpdf(double z, double mu, double phi,
                                    double gamma);

// Same marginal by adaptive quadrature over w (relative error < 1e-8).
// Throws NumericalError when the quadrature does not converge.
double marginalize_normal_gamma(double z, double mu, double phi, double gamma);

// Adaptive Gauss-Kronrod (7/15) quadrature of f over the finite [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-10,
                          double abs_tol = 0.0);

}  // namespace bayesr
