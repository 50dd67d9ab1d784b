#include "bayesr/priors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "bayesr/error.hpp"

namespace bayesr {

void HyperParams::validate() const {
  const std::array<std::pair<const char*, double>, 7> positive = {{
      {"gamma_upsilon", gamma_upsilon},
      {"gamma_omega", gamma_omega},
      {"gamma_rho", gamma_rho},
      {"phi_upsilon", phi_upsilon},
      {"phi_omega", phi_omega},
      {"phi_rho", phi_rho},
      {"sigma0", sigma0},
  }};
  for (const auto& [name, value] : positive) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw InvalidInput(std::string("HyperParams: ") + name +
                         " must be positive");
    }
  }
  if (!std::isfinite(mu0)) throw InvalidInput("HyperParams: mu0 not finite");
}

double log_normal_pdf(double z, double mean, double precision) {
  if (!(precision > 0.0)) {
    throw InvalidInput("log_normal_pdf: precision must be positive");
  }
  const double d = z - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi) + 0.5 * std::log(precision) -
         0.5 * precision * d * d;
}

double log_gamma_pdf(double x, double rate, double shape) {
  if (!(x > 0.0) || !(rate > 0.0) || !(shape > 0.0)) {
    throw InvalidInput("log_gamma_pdf: arguments must be positive");
  }
  return shape * std::log(rate) - lgamma(shape) + (shape - 1.0) * std::log(x) -
         rate * x;
}

double student_t_logpdf(double z, double mu, double lam, double alpha) {
  if (!(lam > 0.0) || !(alpha > 0.0)) {
    throw InvalidInput("student_t_logpdf: lam and alpha must be positive");
  }
  const double d = z - mu;
  return lgamma(0.5 * (alpha + 1.0)) - lgamma(0.5 * alpha) - lgamma(0.5) +
         0.5 * std::log(lam / alpha) -
         0.5 * (alpha + 1.0) * std::log1p(lam / alpha * d * d);
}

double normal_gamma_marginal_logpdf(double z, double mu, double phi,
                                    double gamma) {
  if (!(phi > 0.0) || !(gamma > 0.0)) {
    throw InvalidInput("normal_gamma_marginal_logpdf: phi, gamma must be > 0");
  }
  return student_t_logpdf(z, mu, gamma / phi, 2.0 * gamma);
}

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Segment {
  double value;
  double error;
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a,
                      double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double fsum = (i == 7) ? f(center) : f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * fsum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
  }
  return {kronrod * half, std::abs(kronrod - gauss) * half};
}

double integrate_recursive(const std::function<double(double)>& f, double a,
                           double b, double tol, const Segment& whole,
                           int depth) {
  if (whole.error <= tol || depth >= 60) {
    if (whole.error > tol && whole.error > 1e-14 * std::abs(whole.value)) {
      throw NumericalError("integrate_adaptive: no convergence");
    }
    return whole.value;
  }
  const double mid = 0.5 * (a + b);
  const Segment left = gauss_kronrod(f, a, mid);
  const Segment right = gauss_kronrod(f, mid, b);
  return integrate_recursive(f, a, mid, 0.5 * tol, left, depth + 1) +
         integrate_recursive(f, mid, b, 0.5 * tol, right, depth + 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double abs_tol) {
  if (!(b > a)) return 0.0;
  // A coarse pass fixes the scale for the relative tolerance.
  constexpr int kPieces = 16;
  double coarse = 0.0;
  std::array<Segment, kPieces> pieces{};
  const double step = (b - a) / kPieces;
  for (int i = 0; i < kPieces; ++i) {
    pieces[i] = gauss_kronrod(f, a + i * step, a + (i + 1) * step);
    coarse += pieces[i].value;
  }
  const double tol = std::max(abs_tol, rel_tol * std::abs(coarse)) / kPieces;
  double total = 0.0;
  for (int i = 0; i < kPieces; ++i) {
    const double lo = a + i * step;
    const double hi = (i + 1 == kPieces) ? b : a + (i + 1) * step;
    total += integrate_recursive(f, lo, hi, tol, pieces[i], 0);
  }
  if (!std::isfinite(total)) {
    throw NumericalError("integrate_adaptive: non-finite result");
  }
  return total;
}

double marginalize_normal_gamma(double z, double mu, double phi,
                                double gamma) {
  if (!(phi > 0.0) || !(gamma > 0.0)) {
    throw InvalidInput("marginalize_normal_gamma: phi, gamma must be > 0");
  }
  const double d = z - mu;
  // Over u = log w the integrand is proportional to
  // exp((gamma + 1/2) u - (phi + d^2 / 2) e^u), peaked at u*.
  const double exponent = gamma + 0.5;
  const double rate = phi + 0.5 * d * d;
  const double u_star = std::log(exponent / rate);
  const double lo = u_star - 60.0 / exponent - 5.0;
  const double hi = u_star + std::log(80.0 / exponent + 5.0);
  const double log_norm =
      gamma * std::log(phi) - lgamma(gamma) - 0.5 * std::log(2.0 * std::numbers::pi);
  // Subtract the log integrand at its peak so the quadrature sees values of
  // order one whatever the scale of phi.
  const double log_peak = exponent * u_star - exponent;
  auto integrand = [&](double u) {
    return std::exp(exponent * (u - u_star) - rate * std::exp(u) + exponent);
  };
  const double scaled = integrate_adaptive(integrand, lo, hi, 1e-11);
  if (!(scaled > 0.0)) {
    throw NumericalError("marginalize_normal_gamma: vanishing integral");
  }
  return log_norm + log_peak + std::log(scaled);
}

}  // namespace bayesr
