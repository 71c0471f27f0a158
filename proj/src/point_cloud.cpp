#include "pcsim/point_cloud.hpp"

#include <string>

namespace pcsim {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::EmptyCloud:
    return "EmptyCloud";
  case ErrorCode::NonFinite:
    return "NonFinite";
  case ErrorCode::InvalidCount:
    return "InvalidCount";
  case ErrorCode::InvalidParameter:
    return "InvalidParameter";
  case ErrorCode::CardinalityMismatch:
    return "CardinalityMismatch";
  case ErrorCode::SizeLimitExceeded:
    return "SizeLimitExceeded";
  case ErrorCode::NonConvergence:
    return "NonConvergence";
  case ErrorCode::InsufficientPoints:
    return "InsufficientPoints";
  case ErrorCode::ShapeMismatch:
    return "ShapeMismatch";
  case ErrorCode::ParseError:
    return "ParseError";
  }
  return "Unknown";
}

PointCloud::PointCloud(std::vector<Point3> points) : points_(std::move(points)) {
  if (points_.empty()) {
    throw Error(ErrorCode::EmptyCloud, "point cloud has no points");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_[i].finite()) {
      throw Error(ErrorCode::NonFinite,
                  "point " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
}

PointCloud PointCloud::from_buffer(std::span<const double> xyz) {
  if (xyz.size() % 3 != 0) {
    throw Error(ErrorCode::ShapeMismatch,
                "buffer length " + std::to_string(xyz.size()) +
                    " is not a multiple of 3");
  }
  for (std::size_t i = 0; i < xyz.size(); ++i) {
    if (!std::isfinite(xyz[i])) {
      throw Error(ErrorCode::NonFinite,
                  "buffer index " + std::to_string(i) + " is not finite");
    }
  }
  std::vector<Point3> pts(xyz.size() / 3);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i] = {xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]};
  }
  return PointCloud(std::move(pts));
}

std::vector<double> PointCloud::to_buffer() const {
  std::vector<double> out;
  out.reserve(points_.size() * 3);
  for (const auto &p : points_) {
    out.push_back(p.x);
    out.push_back(p.y);
    out.push_back(p.z);
  }
  return out;
}

Point3 PointCloud::centroid() const {
  Point3 c;
  for (const auto &p : points_) {
    c += p;
  }
  return c * (1.0 / static_cast<double>(points_.size()));
}

PointCloud select(const PointCloud &cloud, std::span<const std::size_t> ids) {
  std::vector<Point3> pts;
  pts.reserve(ids.size());
  for (auto id : ids) {
    if (id >= cloud.size()) {
      throw Error(ErrorCode::InvalidCount, "select: id " + std::to_string(id) +
                                               " out of range for " +
                                               std::to_string(cloud.size()) + " points");
    }
    pts.push_back(cloud[id]);
  }
  return PointCloud(std::move(pts));
}

PointCloud concat(const PointCloud &a, const PointCloud &b) {
  std::vector<Point3> pts(a.begin(), a.end());
  pts.insert(pts.end(), b.begin(), b.end());
  return PointCloud(std::move(pts));
}

} // namespace pcsim
