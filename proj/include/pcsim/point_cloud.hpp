#ifndef PCSIM_POINT_CLOUD_HPP
#define PCSIM_POINT_CLOUD_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "pcsim/error.hpp"

namespace pcsim {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3 &, const Point3 &) = default;

  Point3 &operator+=(const Point3 &o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Point3 &operator-=(const Point3 &o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  Point3 &operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  double operator[](std::size_t axis) const {
    return axis == 0 ? x : (axis == 1 ? y : z);
  }
  double &operator[](std::size_t axis) {
    return axis == 0 ? x : (axis == 1 ? y : z);
  }

  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

inline Point3 operator+(Point3 a, const Point3 &b) { return a += b; }
inline Point3 operator-(Point3 a, const Point3 &b) { return a -= b; }
inline Point3 operator*(Point3 a, double s) { return a *= s; }
inline Point3 operator*(double s, Point3 a) { return a *= s; }

inline double dot(const Point3 &a, const Point3 &b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

// All distance evaluations in the library go through this one expression so
// that index queries and brute-force scans agree bit for bit.
inline double squared_distance(const Point3 &a, const Point3 &b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

inline double distance(const Point3 &a, const Point3 &b) {
  return std::sqrt(squared_distance(a, b));
}

inline double norm(const Point3 &a) { return std::sqrt(dot(a, a)); }

/// Ordered, non-empty set of finite 3D points. Value type; every
/// constructor validates its input.
class PointCloud {
public:
  explicit PointCloud(std::vector<Point3> points);

  /// Row-major n x 3 buffer. Throws ShapeMismatch when the length is not a
  /// multiple of 3 and NonFinite naming the first offending buffer index.
  static PointCloud from_buffer(std::span<const double> xyz);

  std::size_t size() const noexcept { return points_.size(); }
  const Point3 &operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point3> points() const noexcept { return points_; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  std::vector<double> to_buffer() const;
  Point3 centroid() const;

  friend bool operator==(const PointCloud &, const PointCloud &) = default;

private:
  std::vector<Point3> points_;
};

/// Subset in the order given by `ids`.
PointCloud select(const PointCloud &cloud, std::span<const std::size_t> ids);

/// Concatenation, a's points first.
PointCloud concat(const PointCloud &a, const PointCloud &b);

} // namespace pcsim

#endif // PCSIM_POINT_CLOUD_HPP
