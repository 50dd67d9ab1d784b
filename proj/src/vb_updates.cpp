#include <cmath>
#include <string>

#include "bayesr/error.hpp"
#include "bayesr/vb_solver.hpp"

namespace bayesr {

namespace {

void check_forced(const ForcedMeans& forced, const VariationalState& s) {
  auto check = [](const std::optional<ImagePlane>& p, Shape want,
                  const char* name) {
    if (!p) return;
    if (p->shape() != want) {
      throw InvalidInput(std::string("forced ") + name + " has wrong shape");
    }
    for (double v : p->values()) {
      if (!(v >= 0.0)) {
        throw InvalidInput(std::string("forced ") + name + " must be >= 0");
      }
    }
  };
  check(forced.upsilon, s.hr_shape(), "upsilon");
  check(forced.omega, s.hr_shape(), "omega");
  check(forced.rho, s.lr_shape(), "rho");
}

ImagePlane rho_of(const VariationalState& s, const ForcedMeans& f) {
  return f.rho ? *f.rho : s.mean_rho();
}
ImagePlane upsilon_of(const VariationalState& s, const ForcedMeans& f) {
  return f.upsilon ? *f.upsilon : s.mean_upsilon();
}
ImagePlane omega_of(const VariationalState& s, const ForcedMeans& f) {
  return f.omega ? *f.omega : s.mean_omega();
}

void check_observation(const VariationalState& s, const ImagePlane& y,
                       const DegradationOperator& op) {
  if (y.shape() != s.lr_shape() || !op.consistent(s.hr_shape(), y.shape())) {
    throw InvalidInput("update: observation and state shapes disagree");
  }
}

// Jacobi-preconditioned conjugate gradients for H x = b, started from the
// incoming x. Each iterate lowers 0.5 x'Hx - b'x, so stopping early still
// yields a descent step.
template <class Apply>
void conjugate_gradient(const Apply& apply_h, const ImagePlane& diag,
                        const ImagePlane& b, ImagePlane& x,
                        const LinearSolveOptions& opt) {
  const double b_norm = std::sqrt(dot(b, b));
  if (b_norm == 0.0) {
    x = ImagePlane(b.shape(), 0.0);
    return;
  }
  const int max_iter = opt.max_iterations > 0
                           ? opt.max_iterations
                           : 2 * static_cast<int>(b.size()) + 50;
  ImagePlane r = b - apply_h(x);
  ImagePlane z(r.shape());
  for (std::size_t i = 0; i < r.size(); ++i) z[i] = r[i] / diag[i];
  ImagePlane p = z;
  double rz = dot(r, z);
  const double target = opt.rel_tol * b_norm;
  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(dot(r, r)) <= target || rz <= 0.0) break;
    const ImagePlane hp = apply_h(p);
    const double curvature = dot(p, hp);
    if (!(curvature > 0.0)) break;
    const double step = rz / curvature;
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += step * p[i];
      r[i] -= step * hp[i];
      z[i] = r[i] / diag[i];
    }
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
  }
  if (!x.all_finite()) {
    throw NumericalError("conjugate gradient produced non-finite values");
  }
}

}  // namespace

void update_noise_mean(VariationalState& state, const ImagePlane& y,
                       const DegradationOperator& op, const HyperParams& hyper,
                       const ForcedMeans& forced) {
  check_observation(state, y, op);
  check_forced(forced, state);
  const ImagePlane rho = rho_of(state, forced);
  const ImagePlane residual = y - op.apply(state.mu_x + state.mu_z);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double var = 1.0 / (rho[i] + hyper.sigma0);
    state.sigma_m2[i] = var;
    state.mu_m[i] = var * (rho[i] * residual[i] + hyper.sigma0 * hyper.mu0);
  }
}

void update_sparse(VariationalState& state, const ImagePlane& y,
                   const DegradationOperator& op, const HyperParams&,
                   const ForcedMeans& forced, const LinearSolveOptions& solve) {
  check_observation(state, y, op);
  check_forced(forced, state);
  const Shape hr = state.hr_shape();
  const ImagePlane rho = rho_of(state, forced);
  const ImagePlane omega = omega_of(state, forced);

  ImagePlane diag = op.apply_sq_adjoint(rho, hr);
  diag += omega;
  for (double v : diag.values()) {
    if (!(v > 0.0)) {
      throw NumericalError("update_sparse: singular precision", "sigma_z2");
    }
  }
  const ImagePlane b = op.apply_adjoint(
      hadamard(rho, y - op.apply(state.mu_x) - state.mu_m), hr);
  auto apply_h = [&](const ImagePlane& v) {
    ImagePlane out = op.apply_adjoint(hadamard(rho, op.apply(v)), hr);
    out += hadamard(omega, v);
    return out;
  };
  conjugate_gradient(apply_h, diag, b, state.mu_z, solve);
  for (std::size_t i = 0; i < diag.size(); ++i) state.sigma_z2[i] = 1.0 / diag[i];
}

void update_smooth(VariationalState& state, const ImagePlane& y,
                   const DegradationOperator& op, const HyperParams&,
                   const ForcedMeans& forced, const LinearSolveOptions& solve) {
  check_observation(state, y, op);
  check_forced(forced, state);
  const Shape hr = state.hr_shape();
  const ImagePlane rho = rho_of(state, forced);
  const ImagePlane ups = upsilon_of(state, forced);

  ImagePlane diag = op.apply_sq_adjoint(rho, hr);
  diag += difference_gram_diagonal(ups);
  for (double v : diag.values()) {
    if (!(v > 0.0)) {
      throw NumericalError("update_smooth: singular precision", "sigma_x2");
    }
  }
  const ImagePlane b = op.apply_adjoint(
      hadamard(rho, y - op.apply(state.mu_z) - state.mu_m), hr);
  auto apply_h = [&](const ImagePlane& v) {
    ImagePlane out = op.apply_adjoint(hadamard(rho, op.apply(v)), hr);
    for (Axis axis : {Axis::kHorizontal, Axis::kVertical}) {
      out += finite_difference_adjoint(
          hadamard(ups, finite_difference(v, axis)), axis);
    }
    return out;
  };
  conjugate_gradient(apply_h, diag, b, state.mu_x, solve);
  for (std::size_t i = 0; i < diag.size(); ++i) state.sigma_x2[i] = 1.0 / diag[i];
}

void update_upsilon(VariationalState& state, const HyperParams& hyper) {
  const ImagePlane dh = finite_difference(state.mu_x, Axis::kHorizontal);
  const ImagePlane dv = finite_difference(state.mu_x, Axis::kVertical);
  const ImagePlane energy = difference_row_energy(state.sigma_x2);
  const double shape = hyper.gamma_upsilon + 0.5;
  for (std::size_t i = 0; i < energy.size(); ++i) {
    state.alpha_ups[i] = shape;
    state.beta_ups[i] =
        0.5 * (dh[i] * dh[i] + dv[i] * dv[i] + energy[i]) + hyper.phi_upsilon;
  }
}

void update_omega(VariationalState& state, const HyperParams& hyper) {
  const double shape = hyper.gamma_omega + 0.5;
  for (std::size_t i = 0; i < state.mu_z.size(); ++i) {
    const double mz = state.mu_z[i];
    state.alpha_om[i] = shape;
    state.beta_om[i] = 0.5 * (mz * mz + state.sigma_z2[i]) + hyper.phi_omega;
  }
}

void update_rho(VariationalState& state, const ImagePlane& y,
                const DegradationOperator& op, const HyperParams& hyper) {
  check_observation(state, y, op);
  const ImagePlane fit = op.apply(state.mu_x + state.mu_z);
  const ImagePlane spread = op.apply_sq(state.sigma_x2 + state.sigma_z2);
  const double shape = hyper.gamma_rho + 0.5;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - fit[i] - state.mu_m[i];
    state.alpha_rho[i] = shape;
    state.beta_rho[i] =
        0.5 * (r * r + spread[i] + state.sigma_m2[i]) + hyper.phi_rho;
  }
}

void apply_update(UpdateStep step, VariationalState& state,
                  const ImagePlane& y, const DegradationOperator& op,
                  const HyperParams& hyper, const ForcedMeans& forced,
                  const LinearSolveOptions& solve) {
  switch (step) {
    case UpdateStep::kNoiseMean:
      update_noise_mean(state, y, op, hyper, forced);
      return;
    case UpdateStep::kSparse:
      update_sparse(state, y, op, hyper, forced, solve);
      return;
    case UpdateStep::kSmooth:
      update_smooth(state, y, op, hyper, forced, solve);
      return;
    case UpdateStep::kUpsilon:
      if (!forced.upsilon) update_upsilon(state, hyper);
      return;
    case UpdateStep::kOmega:
      if (!forced.omega) update_omega(state, hyper);
      return;
    case UpdateStep::kRho:
      if (!forced.rho) update_rho(state, y, op, hyper);
      return;
  }
}

}  // namespace bayesr
