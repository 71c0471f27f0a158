#ifndef PCSIM_NEIGHBOR_INDEX_HPP
#define PCSIM_NEIGHBOR_INDEX_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pcsim/parallel.hpp"
#include "pcsim/point_cloud.hpp"

namespace pcsim {

struct Neighbor {
  std::size_t id = 0;
  double squared_distance = 0.0;

  double distance() const { return std::sqrt(squared_distance); }
};

/// Orders by distance, then by lower point index.
inline bool closer(const Neighbor &a, const Neighbor &b) {
  return a.squared_distance < b.squared_distance ||
         (a.squared_distance == b.squared_distance && a.id < b.id);
}

/// Exact k-nearest-neighbour index (kd-tree). Immutable after construction
/// and safe for concurrent queries. Results match a brute-force scan exactly,
/// including the lower-index tie rule.
class NeighborIndex {
public:
  explicit NeighborIndex(const PointCloud &cloud);

  std::size_t size() const noexcept { return cloud_.size(); }
  const PointCloud &cloud() const noexcept { return cloud_; }

  /// min(k, size()) neighbours sorted by `closer`. k must be >= 1.
  std::vector<Neighbor> nearest(const Point3 &q, std::size_t k) const;

  Neighbor nearest_one(const Point3 &q) const;

private:
  struct Node {
    // Leaves: [begin, end) into order_. Inner: split axis/value and children.
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double split = 0.0;
    std::uint8_t axis = 0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search_one(std::int32_t node, const Point3 &q, Neighbor &best) const;
  void search_k(std::int32_t node, const Point3 &q, std::size_t k,
                std::vector<Neighbor> &heap) const;

  PointCloud cloud_;
  std::vector<std::uint32_t> order_;
  std::vector<Point3> ordered_points_;
  std::vector<Node> nodes_;
};

NeighborIndex build_index(const PointCloud &cloud);

/// Nearest neighbour in `index` for every point of `queries`.
struct NearestPass {
  std::vector<std::size_t> ids;
  std::vector<double> squared_distances;
};

NearestPass nearest_pass(const PointCloud &queries, const NeighborIndex &index,
                         Exec exec = Exec::parallel);

/// The k nearest for every query, row-major (queries.size() x min(k, n)).
struct KnnPass {
  std::size_t k = 0;
  std::vector<Neighbor> neighbors;
};

KnnPass knn_pass(const PointCloud &queries, const NeighborIndex &index,
                 std::size_t k, Exec exec = Exec::parallel);

/// Brute-force O(n*m) version of nearest_pass; reference for the index.
NearestPass nearest_pass_brute(const PointCloud &queries, const PointCloud &ref,
                               Exec exec = Exec::parallel);

} // namespace pcsim

#endif // PCSIM_NEIGHBOR_INDEX_HPP
