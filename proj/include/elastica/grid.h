#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace elastica {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Sampling of the parameter sphere. Rows run pole to pole in the polar angle
// u (both poles sampled), columns are periodic in the azimuth v.
struct GridShape {
  int nu = 0;
  int nv = 0;

  double du() const { return std::numbers::pi / (nu - 1); }
  double dv() const { return 2.0 * std::numbers::pi / nv; }
  double u(int i) const { return du() * i; }
  double v(int j) const { return dv() * j; }
  std::size_t size() const { return static_cast<std::size_t>(nu) * nv; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * nv + j; }
  int wrap(int j) const { return ((j % nv) + nv) % nv; }

  bool operator==(const GridShape&) const = default;
};

// Row-major (i outer, j inner) storage of one value per grid node.
template <typename T>
class GridField {
 public:
  GridField() = default;
  explicit GridField(GridShape shape, const T& fill = T{}) : shape_(shape), data_(shape.size(), fill) {}
  GridField(GridShape shape, std::vector<T> data) : shape_(shape), data_(std::move(data)) {}

  const GridShape& shape() const { return shape_; }
  int nu() const { return shape_.nu; }
  int nv() const { return shape_.nv; }
  std::size_t size() const { return data_.size(); }

  T& operator()(int i, int j) { return data_[shape_.index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[shape_.index(i, j)]; }
  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }

  // Column index wraps periodically.
  const T& wrapped(int i, int j) const { return data_[shape_.index(i, shape_.wrap(j))]; }

  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

 private:
  GridShape shape_{};
  std::vector<T> data_;
};

using ScalarField = GridField<double>;
using VectorField = GridField<Vec3>;
// A perturbation of a surface (δf and its tangential/normal parts).
using TangentField = VectorField;

inline VectorField operator+(const VectorField& a, const VectorField& b) {
  VectorField out(a.shape());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

inline VectorField operator-(const VectorField& a, const VectorField& b) {
  VectorField out(a.shape());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

inline VectorField operator*(double s, const VectorField& a) {
  VectorField out(a.shape());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = s * a[k];
  return out;
}

// Rows excluded at each pole from every surface integral and curvature field.
struct PoleMargin {
  int rows = 3;

  int first_row() const { return rows; }
  int last_row(const GridShape& g) const { return g.nu - 1 - rows; }
};

}  // namespace elastica
