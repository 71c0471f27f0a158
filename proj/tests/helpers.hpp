#pragma once

#include <random>

#include "doctest.h"

#include "oracles.hpp"
#include "pcsim/error.hpp"
#include "pcsim/point_cloud.hpp"

inline pcsim::PointCloud cloud_of(oracle::Pts pts) { return pcsim::PointCloud(std::move(pts)); }

inline pcsim::PointCloud random_cloud(std::mt19937_64 &rng, std::size_t n, double scale = 1.0) {
  return cloud_of(oracle::random_points(rng, n, scale));
}

inline oracle::Pts pts_of(const pcsim::PointCloud &c) { return {c.begin(), c.end()}; }

// Runs `f` and reports the ErrorCode it threw.
template <class F> pcsim::ErrorCode error_of(F &&f) {
  try {
    f();
  } catch (const pcsim::Error &e) {
    return e.code();
  }
  FAIL("no pcsim::Error thrown");
  return pcsim::ErrorCode::ParseError;
}

inline bool close_rel(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)) + 1e-15;
}
