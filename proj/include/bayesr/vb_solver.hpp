#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bayesr/degradation.hpp"
#include "bayesr/image.hpp"
#include "bayesr/priors.hpp"

namespace bayesr {

// Parameters of the factorized posterior q(m) q(rho) q(x) q(upsilon) q(z)
// q(omega). Gaussian factors carry mean and variance; Gamma factors carry
// shape (alpha) and rate (beta), so their means are alpha / beta.
struct VariationalState {
  // LR shape.
  ImagePlane mu_m, sigma_m2;
  ImagePlane alpha_rho, beta_rho;
  // HR shape.
  ImagePlane mu_x, sigma_x2;
  ImagePlane alpha_ups, beta_ups;
  ImagePlane mu_z, sigma_z2;
  ImagePlane alpha_om, beta_om;

  Shape lr_shape() const { return mu_m.shape(); }
  Shape hr_shape() const { return mu_x.shape(); }

  ImagePlane mean_rho() const;
  ImagePlane mean_upsilon() const;
  ImagePlane mean_omega() const;

  // Throws InvalidInput unless shapes agree, every value is finite and every
  // variance, shape and rate is strictly positive.
  void validate() const;

  friend bool operator==(const VariationalState&,
                         const VariationalState&) = default;
};

// Names and pointers for generic traversal (dumping, change measurement).
struct StateField {
  const char* name;
  const char* role;
  bool high_resolution;
  ImagePlane VariationalState::*member;
};
const std::vector<StateField>& state_fields();

// Largest per-field relative change max_i |a_i - b_i| / max_i |a_i|.
double max_relative_change(const VariationalState& before,
                           const VariationalState& after);

// Replaces the posterior mean of a Gamma factor wherever it enters the
// Gaussian updates; the corresponding Gamma update becomes a no-op in solve.
struct ForcedMeans {
  std::optional<ImagePlane> upsilon;
  std::optional<ImagePlane> omega;
  std::optional<ImagePlane> rho;
};

struct LinearSolveOptions {
  double rel_tol = 1e-13;
  int max_iterations = 0;  // 0: 2 * unknowns + 50
};

VariationalState init_state(const ImagePlane& y, const DegradationOperator& op,
                            const HyperParams& hyper,
                            std::optional<Shape> hr_shape = std::nullopt);

// mu_m = sigma_m2 (mu_rho (y - A(mu_x + mu_z)) + sigma0 mu0),
// sigma_m2 = 1 / (mu_rho + sigma0).
void update_noise_mean(VariationalState& state, const ImagePlane& y,
                       const DegradationOperator& op, const HyperParams& hyper,
                       const ForcedMeans& forced = {});

// sigma_z2 = 1 / diag(H_z) and mu_z = H_z^{-1} A^T diag(mu_rho)(y - A mu_x -
// mu_m) with H_z = A^T diag(mu_rho) A + diag(mu_omega).
void update_sparse(VariationalState& state, const ImagePlane& y,
                   const DegradationOperator& op, const HyperParams& hyper,
                   const ForcedMeans& forced = {},
                   const LinearSolveOptions& solve = {});

// sigma_x2 = 1 / diag(H_x) and mu_x = H_x^{-1} A^T diag(mu_rho)(y - A mu_z -
// mu_m) with H_x = A^T diag(mu_rho) A + D_h^T diag(mu_ups) D_h +
// D_v^T diag(mu_ups) D_v.
void update_smooth(VariationalState& state, const ImagePlane& y,
                   const DegradationOperator& op, const HyperParams& hyper,
                   const ForcedMeans& forced = {},
                   const LinearSolveOptions& solve = {});

void update_upsilon(VariationalState& state, const HyperParams& hyper);
void update_omega(VariationalState& state, const HyperParams& hyper);
void update_rho(VariationalState& state, const ImagePlane& y,
                const DegradationOperator& op, const HyperParams& hyper);

// The thirteen expectations of the objective E[log q] - E[log p(psi, y)].
struct EvidenceTerms {
  double log_lik_y = 0.0;        // E log p(y | psi)
  double log_p_x = 0.0;          // E log p(x | upsilon)
  double log_p_upsilon = 0.0;
  double log_p_z = 0.0;          // E log p(z | omega)
  double log_p_omega = 0.0;
  double log_p_m = 0.0;
  double log_p_rho = 0.0;
  double log_q_x = 0.0;
  double log_q_upsilon = 0.0;
  double log_q_z = 0.0;
  double log_q_omega = 0.0;
  double log_q_m = 0.0;
  double log_q_rho = 0.0;

  double total() const;
};

// Throws NumericalError naming the first non-finite term.
EvidenceTerms evidence_terms(const VariationalState& state,
                             const ImagePlane& y,
                             const DegradationOperator& op,
                             const HyperParams& hyper);
double evidence_bound(const VariationalState& state, const ImagePlane& y,
                      const DegradationOperator& op, const HyperParams& hyper);

enum class UpdateStep { kNoiseMean, kSparse, kSmooth, kUpsilon, kOmega, kRho };

const std::vector<UpdateStep>& default_update_order();
std::string to_string(UpdateStep step);
// Accepts m, z, x, ups, om, rho.
UpdateStep parse_update_step(const std::string& name);

void apply_update(UpdateStep step, VariationalState& state,
                  const ImagePlane& y, const DegradationOperator& op,
                  const HyperParams& hyper, const ForcedMeans& forced = {},
                  const LinearSolveOptions& solve = {});

struct SolveSchedule {
  int max_sweeps = 500;
  double rel_tol = 1e-6;
  // A sweep also has to change every parameter by less than this relative
  // amount (see max_relative_change) before the run counts as converged;
  // unset means rel_tol.
  std::optional<double> param_tol;
  bool trace = true;
  std::vector<UpdateStep> order = default_update_order();
  LinearSolveOptions linear;
  // Sweeps with an objective increase beyond this relative amount count
  // toward divergence; five in a row abort.
  double increase_tol = 1e-8;

  void validate() const;
};

struct SolveResult {
  VariationalState state;
  std::vector<double> trace;  // objective after init, then after each sweep
  int sweeps = 0;
  bool converged = false;
};

// Cyclic coordinate descent on the objective until its relative change drops
// below rel_tol and the parameters have settled. Throws DivergenceError carrying the trace on divergence.
SolveResult solve(const ImagePlane& y, const DegradationOperator& op,
                  const HyperParams& hyper, const SolveSchedule& schedule = {},
                  const ForcedMeans& forced = {},
                  std::optional<VariationalState> initial = std::nullopt);

}  // namespace bayesr
