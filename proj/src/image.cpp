#include "bayesr/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bayesr/error.hpp"

namespace bayesr {

ImagePlane::ImagePlane(int height, int width, double fill)
    : height_(height), width_(width) {
  if (height < 0 || width < 0) {
    throw InvalidInput("ImagePlane: negative dimensions");
  }
  data_.assign(static_cast<std::size_t>(height) * width, fill);
}

ImagePlane::ImagePlane(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
  if (height < 0 || width < 0 ||
      data_.size() != static_cast<std::size_t>(height) * width) {
    throw InvalidInput("ImagePlane: data length does not match " +
                       std::to_string(height) + "x" + std::to_string(width));
  }
  if (!all_finite()) throw InvalidInput("ImagePlane: non-finite value");
}

bool ImagePlane::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

ImagePlane& ImagePlane::operator+=(const ImagePlane& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ImagePlane& ImagePlane::operator-=(const ImagePlane& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ImagePlane& ImagePlane::operator*=(double factor) {
  for (double& v : data_) v *= factor;
  return *this;
}

ImagePlane operator+(ImagePlane a, const ImagePlane& b) { return a += b; }
ImagePlane operator-(ImagePlane a, const ImagePlane& b) { return a -= b; }
ImagePlane operator*(ImagePlane a, double factor) { return a *= factor; }

ImagePlane hadamard(const ImagePlane& a, const ImagePlane& b) {
  require_same_shape(a, b, "hadamard");
  ImagePlane out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  return out;
}

ImageStack::ImageStack(std::vector<ImagePlane> channels)
    : channels_(std::move(channels)) {
  if (channels_.size() != 1 && channels_.size() != 3) {
    throw InvalidInput("ImageStack: channel count must be 1 or 3");
  }
  for (const auto& c : channels_) {
    if (c.shape() != channels_.front().shape()) {
      throw InvalidInput("ImageStack: channel shapes differ");
    }
  }
}

ImageStack::ImageStack(ImagePlane gray) {
  channels_.push_back(std::move(gray));
}

Shape ImageStack::shape() const {
  return channels_.empty() ? Shape{} : channels_.front().shape();
}

void require_same_shape(const ImagePlane& a, const ImagePlane& b,
                        const char* context) {
  if (a.shape() != b.shape()) {
    throw InvalidInput(std::string(context) + ": shape mismatch " +
                       std::to_string(a.height()) + "x" +
                       std::to_string(a.width()) + " vs " +
                       std::to_string(b.height()) + "x" +
                       std::to_string(b.width()));
  }
}

namespace {

void require_non_empty(const ImagePlane& plane, const char* context) {
  if (plane.empty()) {
    throw InvalidInput(std::string(context) + ": empty plane");
  }
}

}  // namespace

ImagePlane finite_difference(const ImagePlane& plane, Axis axis) {
  require_non_empty(plane, "finite_difference");
  const int h = plane.height();
  const int w = plane.width();
  ImagePlane out(h, w);
  if (axis == Axis::kHorizontal) {
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c + 1 < w; ++c) out(r, c) = plane(r, c + 1) - plane(r, c);
    }
  } else {
    for (int r = 0; r + 1 < h; ++r) {
      for (int c = 0; c < w; ++c) out(r, c) = plane(r + 1, c) - plane(r, c);
    }
  }
  return out;
}

ImagePlane finite_difference_adjoint(const ImagePlane& plane, Axis axis) {
  require_non_empty(plane, "finite_difference_adjoint");
  const int h = plane.height();
  const int w = plane.width();
  ImagePlane out(h, w);
  // (D^T g)[j] = g[j-1] - g[j], with g's trailing entry ignored.
  if (axis == Axis::kHorizontal) {
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c + 1 < w; ++c) {
        out(r, c) -= plane(r, c);
        out(r, c + 1) += plane(r, c);
      }
    }
  } else {
    for (int r = 0; r + 1 < h; ++r) {
      for (int c = 0; c < w; ++c) {
        out(r, c) -= plane(r, c);
        out(r + 1, c) += plane(r, c);
      }
    }
  }
  return out;
}

ImagePlane difference_gram_diagonal(const ImagePlane& weights) {
  require_non_empty(weights, "difference_gram_diagonal");
  const int h = weights.height();
  const int w = weights.width();
  ImagePlane out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double d = 0.0;
      if (c + 1 < w) d += weights(r, c);
      if (c > 0) d += weights(r, c - 1);
      if (r + 1 < h) d += weights(r, c);
      if (r > 0) d += weights(r - 1, c);
      out(r, c) = d;
    }
  }
  return out;
}

ImagePlane difference_row_energy(const ImagePlane& v) {
  require_non_empty(v, "difference_row_energy");
  const int h = v.height();
  const int w = v.width();
  ImagePlane out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double e = 0.0;
      if (c + 1 < w) e += v(r, c) + v(r, c + 1);
      if (r + 1 < h) e += v(r, c) + v(r + 1, c);
      out(r, c) = e;
    }
  }
  return out;
}

double weighted_sq_norm(const ImagePlane& v, const ImagePlane& w) {
  require_same_shape(v, w, "weighted_sq_norm");
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (w[i] < 0.0) throw InvalidInput("weighted_sq_norm: negative weight");
    acc += w[i] * v[i] * v[i];
  }
  return acc;
}

double dot(const ImagePlane& a, const ImagePlane& b) {
  require_same_shape(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Neumaier compensated summation; flat planes get an exact mean.
double sum(const ImagePlane& a) {
  double acc = 0.0;
  double carry = 0.0;
  for (double v : a.values()) {
    const double t = acc + v;
    carry += std::abs(acc) >= std::abs(v) ? (acc - t) + v : (v - t) + acc;
    acc = t;
  }
  return acc + carry;
}

double mean(const ImagePlane& a) {
  if (a.empty()) throw InvalidInput("mean: empty plane");
  return sum(a) / static_cast<double>(a.size());
}

double variance(const ImagePlane& a) {
  const double m = mean(a);
  double acc = 0.0;
  for (double v : a.values()) acc += (v - m) * (v - m);
  return acc / static_cast<double>(a.size());
}

ImagePlane clamp_unit(const ImagePlane& a) {
  ImagePlane out = a;
  for (double& v : out.values()) v = std::clamp(v, 0.0, 1.0);
  return out;
}

ImagePlane crop(const ImagePlane& a, int top, int left, int height,
                int width) {
  if (top < 0 || left < 0 || height < 0 || width < 0 ||
      top + height > a.height() || left + width > a.width()) {
    throw InvalidInput("crop: window outside the plane");
  }
  ImagePlane out(height, width);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) out(r, c) = a(top + r, left + c);
  }
  return out;
}

}  // namespace bayesr
