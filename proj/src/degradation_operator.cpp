#include <algorithm>
#include <cmath>
#include <string>

#include "bayesr/degradation.hpp"
#include "bayesr/error.hpp"

namespace bayesr {

int reflect_index(int p, int n) {
  const int period = 2 * n;
  int m = p % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

namespace {

// Source indices touched by one output line along one axis. Reflection can
// map several taps onto the same source index; `slot` records the folding.
struct AxisPlan {
  std::vector<int> index;   // per tap
  std::vector<int> slot;    // per tap, position in `unique`
  std::vector<int> unique;  // distinct source indices
};

std::vector<AxisPlan> make_axis_plans(int out_len, int in_len, int taps,
                                      int center, int scale) {
  std::vector<AxisPlan> plans(out_len);
  for (int o = 0; o < out_len; ++o) {
    AxisPlan& plan = plans[o];
    plan.index.resize(taps);
    plan.slot.resize(taps);
    const int anchor = o * scale;
    for (int t = 0; t < taps; ++t) {
      const int src = reflect_index(anchor - (t - center), in_len);
      plan.index[t] = src;
      auto it = std::find(plan.unique.begin(), plan.unique.end(), src);
      if (it == plan.unique.end()) {
        plan.slot[t] = static_cast<int>(plan.unique.size());
        plan.unique.push_back(src);
      } else {
        plan.slot[t] = static_cast<int>(it - plan.unique.begin());
      }
    }
  }
  return plans;
}

struct Plans {
  std::vector<AxisPlan> rows;
  std::vector<AxisPlan> cols;
};

Plans make_plans(const BlurKernel& k, int scale, Shape hr, Shape lr) {
  return {make_axis_plans(lr.height, hr.height, k.height(), k.center_row(),
                          scale),
          make_axis_plans(lr.width, hr.width, k.width(), k.center_col(),
                          scale)};
}

// Folded coefficients of A's row for output (rp, cp): entry (i, j) is the
// weight on source pixel (rp.unique[i], cp.unique[j]).
void folded_row(const BlurKernel& k, const AxisPlan& rp, const AxisPlan& cp,
                std::vector<double>& coeffs) {
  const std::size_t nc = cp.unique.size();
  coeffs.assign(rp.unique.size() * nc, 0.0);
  for (int a = 0; a < k.height(); ++a) {
    const std::size_t base = static_cast<std::size_t>(rp.slot[a]) * nc;
    for (int b = 0; b < k.width(); ++b) coeffs[base + cp.slot[b]] += k(a, b);
  }
}

}  // namespace

DegradationOperator::DegradationOperator(BlurKernel kernel, int scale)
    : kernel_(std::move(kernel)), scale_(scale) {
  if (scale < 1) throw InvalidInput("DegradationOperator: scale must be >= 1");
}

Shape DegradationOperator::output_shape(Shape hr) const {
  return {(hr.height + scale_ - 1) / scale_, (hr.width + scale_ - 1) / scale_};
}

bool DegradationOperator::consistent(Shape hr, Shape lr) const {
  return !hr.empty() && output_shape(hr) == lr;
}

ImagePlane DegradationOperator::apply(const ImagePlane& hr) const {
  if (hr.empty()) throw InvalidInput("apply: empty plane");
  const Shape lr = output_shape(hr.shape());
  const Plans plans = make_plans(kernel_, scale_, hr.shape(), lr);
  ImagePlane out(lr);
  for (int r = 0; r < lr.height; ++r) {
    const AxisPlan& rp = plans.rows[r];
    for (int c = 0; c < lr.width; ++c) {
      const AxisPlan& cp = plans.cols[c];
      double acc = 0.0;
      for (int a = 0; a < kernel_.height(); ++a) {
        const int src_r = rp.index[a];
        for (int b = 0; b < kernel_.width(); ++b) {
          acc += kernel_(a, b) * hr(src_r, cp.index[b]);
        }
      }
      out(r, c) = acc;
    }
  }
  return out;
}

ImagePlane DegradationOperator::apply_adjoint(const ImagePlane& lr,
                                              Shape hr_shape) const {
  if (!consistent(hr_shape, lr.shape())) {
    throw InvalidInput("apply_adjoint: LR shape inconsistent with HR shape");
  }
  const Plans plans = make_plans(kernel_, scale_, hr_shape, lr.shape());
  ImagePlane out(hr_shape);
  for (int r = 0; r < lr.height(); ++r) {
    const AxisPlan& rp = plans.rows[r];
    for (int c = 0; c < lr.width(); ++c) {
      const AxisPlan& cp = plans.cols[c];
      const double v = lr(r, c);
      if (v == 0.0) continue;
      for (int a = 0; a < kernel_.height(); ++a) {
        const int dst_r = rp.index[a];
        for (int b = 0; b < kernel_.width(); ++b) {
          out(dst_r, cp.index[b]) += kernel_(a, b) * v;
        }
      }
    }
  }
  return out;
}

ImagePlane DegradationOperator::apply_sq_adjoint(const ImagePlane& lr_weights,
                                                 Shape hr_shape) const {
  if (!consistent(hr_shape, lr_weights.shape())) {
    throw InvalidInput("apply_sq_adjoint: LR shape inconsistent with HR");
  }
  for (double w : lr_weights.values()) {
    if (w < 0.0) throw InvalidInput("apply_sq_adjoint: negative weight");
  }
  const Plans plans = make_plans(kernel_, scale_, hr_shape, lr_weights.shape());
  ImagePlane out(hr_shape);
  std::vector<double> coeffs;
  for (int r = 0; r < lr_weights.height(); ++r) {
    const AxisPlan& rp = plans.rows[r];
    for (int c = 0; c < lr_weights.width(); ++c) {
      const AxisPlan& cp = plans.cols[c];
      const double w = lr_weights(r, c);
      if (w == 0.0) continue;
      folded_row(kernel_, rp, cp, coeffs);
      const std::size_t nc = cp.unique.size();
      for (std::size_t i = 0; i < rp.unique.size(); ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
          const double a = coeffs[i * nc + j];
          out(rp.unique[i], cp.unique[j]) += w * a * a;
        }
      }
    }
  }
  return out;
}

ImagePlane DegradationOperator::apply_sq(const ImagePlane& hr) const {
  if (hr.empty()) throw InvalidInput("apply_sq: empty plane");
  const Shape lr = output_shape(hr.shape());
  const Plans plans = make_plans(kernel_, scale_, hr.shape(), lr);
  ImagePlane out(lr);
  std::vector<double> coeffs;
  for (int r = 0; r < lr.height; ++r) {
    const AxisPlan& rp = plans.rows[r];
    for (int c = 0; c < lr.width; ++c) {
      const AxisPlan& cp = plans.cols[c];
      folded_row(kernel_, rp, cp, coeffs);
      const std::size_t nc = cp.unique.size();
      double acc = 0.0;
      for (std::size_t i = 0; i < rp.unique.size(); ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
          const double a = coeffs[i * nc + j];
          acc += a * a * hr(rp.unique[i], cp.unique[j]);
        }
      }
      out(r, c) = acc;
    }
  }
  return out;
}

ImagePlane bicubic_upsample(const ImagePlane& lr, int scale, Shape hr_shape) {
  if (lr.empty() || hr_shape.empty()) {
    throw InvalidInput("bicubic_upsample: empty input");
  }
  if (scale < 1) throw InvalidInput("bicubic_upsample: scale must be >= 1");
  const int h = lr.height();
  const int w = lr.width();
  ImagePlane out(hr_shape);
  for (int r = 0; r < hr_shape.height; ++r) {
    const double y = static_cast<double>(r) / scale;
    const int y0 = static_cast<int>(std::floor(y));
    const double fy = y - y0;
    for (int c = 0; c < hr_shape.width; ++c) {
      const double x = static_cast<double>(c) / scale;
      const int x0 = static_cast<int>(std::floor(x));
      const double fx = x - x0;
      double acc = 0.0;
      for (int dy = -1; dy <= 2; ++dy) {
        const double wy = cubic_convolution(dy - fy);
        if (wy == 0.0) continue;
        const int sr = std::clamp(y0 + dy, 0, h - 1);
        for (int dx = -1; dx <= 2; ++dx) {
          const double wx = cubic_convolution(dx - fx);
          if (wx == 0.0) continue;
          acc += wy * wx * lr(sr, std::clamp(x0 + dx, 0, w - 1));
        }
      }
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace bayesr
