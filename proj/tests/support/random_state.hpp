#pragma once

#include <cmath>
#include <random>

#include "bayesr/vb_solver.hpp"
#include "fixtures.hpp"

namespace fixtures {

// An arbitrary valid state: means unrestricted, variances and Gamma
// parameters drawn from moderate positive ranges.
inline bayesr::VariationalState random_state(bayesr::Shape hr,
                                             bayesr::Shape lr,
                                             std::mt19937_64& rng) {
  bayesr::VariationalState s;
  s.mu_m = random_plane(lr, rng, -0.1, 0.1);
  s.sigma_m2 = random_plane(lr, rng, 1e-4, 1e-2);
  s.alpha_rho = random_plane(lr, rng, 1.0, 3.0);
  s.beta_rho = random_plane(lr, rng, 0.01, 0.5);
  s.mu_x = random_plane(hr, rng, 0.0, 1.0);
  s.sigma_x2 = random_plane(hr, rng, 1e-4, 1e-2);
  s.alpha_ups = random_plane(hr, rng, 1.0, 3.0);
  s.beta_ups = random_plane(hr, rng, 0.01, 0.5);
  s.mu_z = random_plane(hr, rng, -0.2, 0.2);
  s.sigma_z2 = random_plane(hr, rng, 1e-4, 1e-2);
  s.alpha_om = random_plane(hr, rng, 1.0, 3.0);
  s.beta_om = random_plane(hr, rng, 0.01, 0.5);
  return s;
}

struct Instance {
  bayesr::DegradationOperator op;
  bayesr::Shape hr;
  bayesr::ImagePlane y;
  bayesr::VariationalState state;
  bayesr::HyperParams hyper;
};

// Random problem of at most max_side x max_side HR pixels, s in {1, 2} and an
// odd kernel of at most 5x5.
inline Instance random_instance(std::mt19937_64& rng, int max_side = 8) {
  std::uniform_int_distribution<int> side(2, max_side);
  std::uniform_int_distribution<int> half(0, 2);
  std::uniform_int_distribution<int> scale(1, 2);
  Instance in;
  in.hr = {side(rng), side(rng)};
  in.op = bayesr::DegradationOperator(
      random_kernel(2 * half(rng) + 1, 2 * half(rng) + 1, rng), scale(rng));
  const bayesr::Shape lr = in.op.output_shape(in.hr);
  in.y = random_plane(lr, rng);
  in.state = random_state(in.hr, lr, rng);
  std::uniform_real_distribution<double> g(1.0, 3.0);
  std::uniform_real_distribution<double> logp(-5.0, -1.0);
  in.hyper.gamma_upsilon = g(rng);
  in.hyper.gamma_omega = g(rng);
  in.hyper.gamma_rho = g(rng);
  in.hyper.phi_upsilon = std::pow(10.0, logp(rng));
  in.hyper.phi_omega = std::pow(10.0, logp(rng));
  in.hyper.phi_rho = std::pow(10.0, logp(rng));
  in.hyper.mu0 = std::uniform_real_distribution<double>(-0.1, 0.1)(rng);
  in.hyper.sigma0 = std::pow(10.0, std::uniform_real_distribution<double>(0, 3)(rng));
  return in;
}

}  // namespace fixtures
