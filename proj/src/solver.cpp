#include <algorithm>
#include <cmath>
#include <string>

#include "bayesr/error.hpp"
#include "bayesr/vb_solver.hpp"

namespace bayesr {

namespace {

constexpr int kDivergenceRun = 5;

}  // namespace

void SolveSchedule::validate() const {
  if (max_sweeps < 1) throw InvalidInput("solve: max_sweeps must be >= 1");
  if (!(rel_tol > 0.0)) throw InvalidInput("solve: rel_tol must be > 0");
  if (order.empty()) throw InvalidInput("solve: empty update order");
  if (param_tol && !(*param_tol > 0.0)) {
    throw InvalidInput("solve: param_tol must be > 0");
  }
  if (!(increase_tol >= 0.0)) {
    throw InvalidInput("solve: increase_tol must be >= 0");
  }
}

SolveResult solve(const ImagePlane& y, const DegradationOperator& op,
                  const HyperParams& hyper, const SolveSchedule& schedule,
                  const ForcedMeans& forced,
                  std::optional<VariationalState> initial) {
  hyper.validate();
  schedule.validate();
  SolveResult result;
  result.state = initial ? std::move(*initial) : init_state(y, op, hyper);
  result.state.validate();
  VariationalState& state = result.state;

  std::vector<double> history;
  double previous = evidence_bound(state, y, op, hyper);
  history.push_back(previous);
  int increases = 0;
  const double param_tol = schedule.param_tol.value_or(schedule.rel_tol);
  for (int sweep = 0; sweep < schedule.max_sweeps; ++sweep) {
    const VariationalState before = state;
    for (UpdateStep step : schedule.order) {
      apply_update(step, state, y, op, hyper, forced, schedule.linear);
    }
    const double current = evidence_bound(state, y, op, hyper);
    history.push_back(current);
    result.sweeps = sweep + 1;

    const double scale = std::max(std::abs(previous), 1e-300);
    if (current - previous > schedule.increase_tol * scale) {
      if (++increases >= kDivergenceRun) {
        throw DivergenceError("solve: objective increased for " +
                                  std::to_string(kDivergenceRun) +
                                  " consecutive sweeps",
                              history);
      }
    } else {
      increases = 0;
    }
    const bool settled =
        std::abs(current - previous) / scale < schedule.rel_tol &&
        max_relative_change(before, state) < param_tol;
    previous = current;
    if (settled) {
      result.converged = true;
      break;
    }
  }
  if (schedule.trace) result.trace = std::move(history);
  return result;
}

}  // namespace bayesr
