#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bayesr {

struct Shape {
  int height = 0;
  int width = 0;

  std::size_t size() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  bool empty() const { return height <= 0 || width <= 0; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

// Row-major H x W plane of double intensities. Values are nominally in [0, 1]
// but intermediate fields of the solver are unbounded.
class ImagePlane {
 public:
  ImagePlane() = default;
  ImagePlane(int height, int width, double fill = 0.0);
  explicit ImagePlane(Shape shape, double fill = 0.0)
      : ImagePlane(shape.height, shape.width, fill) {}
  // Throws InvalidInput when data.size() != height * width or a value is not
  // finite.
  ImagePlane(int height, int width, std::vector<double> data);

  int height() const { return height_; }
  int width() const { return width_; }
  Shape shape() const { return {height_, width_}; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int row, int col) {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }
  double operator()(int row, int col) const {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double>& vector() const { return data_; }

  bool all_finite() const;

  ImagePlane& operator+=(const ImagePlane& other);
  ImagePlane& operator-=(const ImagePlane& other);
  ImagePlane& operator*=(double factor);

  friend bool operator==(const ImagePlane&, const ImagePlane&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

ImagePlane operator+(ImagePlane a, const ImagePlane& b);
ImagePlane operator-(ImagePlane a, const ImagePlane& b);
ImagePlane operator*(ImagePlane a, double factor);
// Elementwise (Hadamard) product.
ImagePlane hadamard(const ImagePlane& a, const ImagePlane& b);

// One or three planes of identical shape.
class ImageStack {
 public:
  ImageStack() = default;
  explicit ImageStack(std::vector<ImagePlane> channels);
  explicit ImageStack(ImagePlane gray);

  int channels() const { return static_cast<int>(channels_.size()); }
  Shape shape() const;
  const ImagePlane& channel(int c) const { return channels_.at(c); }
  ImagePlane& channel(int c) { return channels_.at(c); }
  const std::vector<ImagePlane>& planes() const { return channels_; }

 private:
  std::vector<ImagePlane> channels_;
};

enum class Axis { kHorizontal, kVertical };

// Forward difference along `axis`; the trailing column (horizontal) or row
// (vertical) of the result is zero, so the operator is square.
ImagePlane finite_difference(const ImagePlane& plane, Axis axis);
ImagePlane finite_difference_adjoint(const ImagePlane& plane, Axis axis);

// Diagonal of D_h^T diag(w) D_h + D_v^T diag(w) D_v.
ImagePlane difference_gram_diagonal(const ImagePlane& weights);
// Per-row squared energy: sum_j (D_h[i,j]^2 + D_v[i,j]^2) v_j.
ImagePlane difference_row_energy(const ImagePlane& v);

// sum_i w_i v_i^2. Throws on shape mismatch or negative weights.
double weighted_sq_norm(const ImagePlane& v, const ImagePlane& w);
double dot(const ImagePlane& a, const ImagePlane& b);
double sum(const ImagePlane& a);
double mean(const ImagePlane& a);
// Population variance.
double variance(const ImagePlane& a);

ImagePlane clamp_unit(const ImagePlane& a);
ImagePlane crop(const ImagePlane& a, int top, int left, int height, int width);

void require_same_shape(const ImagePlane& a, const ImagePlane& b,
                        const char* context);

}  // namespace bayesr
