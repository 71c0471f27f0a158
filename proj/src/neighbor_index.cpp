#include "pcsim/neighbor_index.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace pcsim {

namespace {
constexpr std::uint32_t leaf_size = 8;
}

NeighborIndex::NeighborIndex(const PointCloud &cloud) : cloud_(cloud) {
  if (cloud_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::SizeLimitExceeded, "cloud too large to index");
  }
  order_.resize(cloud_.size());
  std::iota(order_.begin(), order_.end(), 0U);
  nodes_.reserve(2 * cloud_.size() / leaf_size + 1);
  build(0, static_cast<std::uint32_t>(order_.size()));
  ordered_points_.reserve(order_.size());
  for (auto id : order_) {
    ordered_points_.push_back(cloud_[id]);
  }
}

std::int32_t NeighborIndex::build(std::uint32_t begin, std::uint32_t end) {
  const auto self = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end, -1, -1, 0.0, 0});
  if (end - begin <= leaf_size) {
    return self;
  }

  Point3 lo = cloud_[order_[begin]];
  Point3 hi = lo;
  for (auto i = begin; i < end; ++i) {
    const auto &p = cloud_[order_[i]];
    for (std::size_t a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  std::uint8_t axis = 0;
  for (std::uint8_t a = 1; a < 3; ++a) {
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) {
      axis = a;
    }
  }

  const auto mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = cloud_[a][axis];
                     const double cb = cloud_[b][axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  const double split = cloud_[order_[mid]][axis];

  const auto left = build(begin, mid);
  const auto right = build(mid, end);
  auto &node = nodes_[static_cast<std::size_t>(self)];
  node.left = left;
  node.right = right;
  node.split = split;
  node.axis = axis;
  return self;
}

// Far-side pruning uses the plane distance, which in floating point never
// exceeds the computed distance to any point on that side, so pruning with a
// strict comparison keeps every tie candidate.
void NeighborIndex::search_one(std::int32_t n, const Point3 &q,
                               Neighbor &best) const {
  const Node &node = nodes_[static_cast<std::size_t>(n)];
  if (node.left < 0) {
    for (auto i = node.begin; i < node.end; ++i) {
      const Neighbor cand{order_[i], squared_distance(q, ordered_points_[i])};
      if (closer(cand, best)) {
        best = cand;
      }
    }
    return;
  }
  const double diff = q[node.axis] - node.split;
  const auto near = diff < 0.0 ? node.left : node.right;
  const auto far = diff < 0.0 ? node.right : node.left;
  search_one(near, q, best);
  if (diff * diff <= best.squared_distance) {
    search_one(far, q, best);
  }
}

void NeighborIndex::search_k(std::int32_t n, const Point3 &q, std::size_t k,
                             std::vector<Neighbor> &heap) const {
  const Node &node = nodes_[static_cast<std::size_t>(n)];
  if (node.left < 0) {
    for (auto i = node.begin; i < node.end; ++i) {
      const Neighbor cand{order_[i], squared_distance(q, ordered_points_[i])};
      if (heap.size() < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end(), closer);
      } else if (closer(cand, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), closer);
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end(), closer);
      }
    }
    return;
  }
  const double diff = q[node.axis] - node.split;
  const auto near = diff < 0.0 ? node.left : node.right;
  const auto far = diff < 0.0 ? node.right : node.left;
  search_k(near, q, k, heap);
  if (heap.size() < k || diff * diff <= heap.front().squared_distance) {
    search_k(far, q, k, heap);
  }
}

std::vector<Neighbor> NeighborIndex::nearest(const Point3 &q,
                                             std::size_t k) const {
  if (k == 0) {
    throw Error(ErrorCode::InvalidCount, "k must be at least 1");
  }
  k = std::min(k, size());
  std::vector<Neighbor> heap;
  heap.reserve(k);
  search_k(0, q, k, heap);
  std::sort_heap(heap.begin(), heap.end(), closer);
  return heap;
}

Neighbor NeighborIndex::nearest_one(const Point3 &q) const {
  Neighbor best{std::numeric_limits<std::size_t>::max(),
                std::numeric_limits<double>::infinity()};
  search_one(0, q, best);
  return best;
}

NeighborIndex build_index(const PointCloud &cloud) { return NeighborIndex(cloud); }

NearestPass nearest_pass(const PointCloud &queries, const NeighborIndex &index,
                         Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
  NearestPass out;
  out.ids.resize(queries.size());
  out.squared_distances.resize(queries.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto nb = index.nearest_one(queries[static_cast<std::size_t>(i)]);
    out.ids[static_cast<std::size_t>(i)] = nb.id;
    out.squared_distances[static_cast<std::size_t>(i)] = nb.squared_distance;
  }
  return out;
}

KnnPass knn_pass(const PointCloud &queries, const NeighborIndex &index,
                 std::size_t k, Exec exec) {
  if (k == 0) {
    throw Error(ErrorCode::InvalidCount, "k must be at least 1");
  }
  KnnPass out;
  out.k = std::min(k, index.size());
  out.neighbors.resize(queries.size() * out.k);
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto row = index.nearest(queries[static_cast<std::size_t>(i)], out.k);
    std::copy(row.begin(), row.end(),
              out.neighbors.begin() + i * static_cast<std::ptrdiff_t>(out.k));
  }
  return out;
}

NearestPass nearest_pass_brute(const PointCloud &queries, const PointCloud &ref,
                               Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
  NearestPass out;
  out.ids.resize(queries.size());
  out.squared_distances.resize(queries.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto &q = queries[static_cast<std::size_t>(i)];
    Neighbor best{0, squared_distance(q, ref[0])};
    for (std::size_t j = 1; j < ref.size(); ++j) {
      const double d = squared_distance(q, ref[j]);
      if (d < best.squared_distance) {
        best = {j, d};
      }
    }
    out.ids[static_cast<std::size_t>(i)] = best.id;
    out.squared_distances[static_cast<std::size_t>(i)] = best.squared_distance;
  }
  return out;
}

} // namespace pcsim
