#include "pcsim/sampling.hpp"

#include <limits>
#include <string>

#include "pcsim/neighbor_index.hpp"

namespace pcsim {

namespace {

struct Best {
  double value = -1.0;
  std::size_t id = std::numeric_limits<std::size_t>::max();
};

// Larger value wins; equal values go to the lower index. Associative and
// commutative, so the reduction result does not depend on the thread split.
inline Best pick(const Best &a, const Best &b) {
  if (a.value > b.value || (a.value == b.value && a.id < b.id)) {
    return a;
  }
  return b;
}

} // namespace

#pragma omp declare reduction(fps_best:Best : omp_out = pick(omp_out, omp_in)) \
    initializer(omp_priv = Best{})

std::vector<std::size_t> fps_indices(const PointCloud &cloud, std::size_t m,
                                     std::size_t seed_id, Exec exec) {
  const std::size_t n = cloud.size();
  if (m < 1 || m > n) {
    throw Error(ErrorCode::InvalidCount, "fps: m=" + std::to_string(m) +
                                             " outside [1, " +
                                             std::to_string(n) + "]");
  }
  if (seed_id >= n) {
    throw Error(ErrorCode::InvalidCount, "fps: seed id out of range");
  }

  std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
  std::vector<char> is_picked(n, 0);
  std::vector<std::size_t> picked;
  picked.reserve(m);
  picked.push_back(seed_id);
  is_picked[seed_id] = 1;
  const auto pts = cloud.points();
  const auto count = static_cast<std::ptrdiff_t>(n);

  while (picked.size() < m) {
    const Point3 last = pts[picked.back()];
    Best best;
#pragma omp parallel for schedule(static) reduction(fps_best : best) if (exec == Exec::parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto u = static_cast<std::size_t>(i);
      const double d = squared_distance(pts[u], last);
      if (d < min_sq[u]) {
        min_sq[u] = d;
      }
      best = pick(best, Best{min_sq[u], u});
    }
    // Already-picked points sit at 0; only when every remaining point
    // duplicates a picked one can the argmax land on a picked index.
    if (best.value <= 0.0) {
      for (std::size_t u = 0; u < n; ++u) {
        if (!is_picked[u]) {
          best = {0.0, u};
          break;
        }
      }
    }
    min_sq[best.id] = 0.0;
    is_picked[best.id] = 1;
    picked.push_back(best.id);
  }
  return picked;
}

PointCloud fps(const PointCloud &cloud, std::size_t m, std::size_t seed_id,
               Exec exec) {
  const auto ids = fps_indices(cloud, m, seed_id, exec);
  return select(cloud, ids);
}

double mean_nn_spacing(const PointCloud &cloud, Exec exec) {
  if (cloud.size() < 2) {
    return 0.0;
  }
  const NeighborIndex index(cloud);
  const auto knn = knn_pass(cloud, index, 2, exec);
  double sum = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    // Row i holds the point itself (or a duplicate at distance 0) first.
    sum += knn.neighbors[2 * i + 1].distance();
  }
  return sum / static_cast<double>(cloud.size());
}

} // namespace pcsim
