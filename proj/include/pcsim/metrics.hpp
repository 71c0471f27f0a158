#ifndef PCSIM_METRICS_HPP
#define PCSIM_METRICS_HPP

#include <cstddef>
#include <string_view>
#include <vector>

#include "pcsim/neighbor_index.hpp"
#include "pcsim/parallel.hpp"
#include "pcsim/point_cloud.hpp"

namespace pcsim {

enum class ChamferVariant {
  T, ///< squared distances
  P, ///< plain Euclidean distances
};

enum class ExponentMode { euclidean, squared };

enum class UnequalVariant { naive, E };

/// Temperature and frequency exponent of the density-aware Chamfer distance.
/// Defaults are the evaluation setting; training typically uses alpha in
/// [40, 100] and lambda in [0, 1).
struct DcdParams {
  double alpha = 1000.0;
  double lambda = 1.0;
  ExponentMode mode = ExponentMode::squared;

  /// Throws InvalidParameter unless alpha > 0 and 0 <= lambda <= 1.
  void validate() const;
};

/// counts[y] = number of source points whose nearest neighbour is target y.
struct QueryFrequency {
  std::vector<std::size_t> counts;

  std::size_t total() const;
};

/// A metric value with its per-point breakdown. The per-point vectors hold
/// each point's share of `value` (averaging factors included), so
/// value == sum(per_point_src) + sum(per_point_tgt) up to rounding.
/// `src` is the first argument as passed by the caller.
struct MetricReport {
  double value = 0.0;
  std::vector<double> per_point_src;
  std::vector<double> per_point_tgt;
  QueryFrequency src_to_tgt; ///< counts over tgt points
  QueryFrequency tgt_to_src; ///< counts over src points
  bool swapped = false;      ///< dcd_unequal evaluated (tgt, src)
};

QueryFrequency query_frequencies(const PointCloud &src,
                                 const NeighborIndex &tgt_index,
                                 Exec exec = Exec::parallel);

QueryFrequency frequencies_from_ids(const std::vector<std::size_t> &ids,
                                    std::size_t target_size);

MetricReport chamfer(const PointCloud &s1, const PointCloud &s2,
                     ChamferVariant variant, Exec exec = Exec::parallel);

double hausdorff(const PointCloud &s1, const PointCloud &s2,
                 Exec exec = Exec::parallel);

/// Equal-cardinality density-aware Chamfer distance, in [0, 1].
/// Throws CardinalityMismatch when |s1| != |s2|.
MetricReport dcd(const PointCloud &s1, const PointCloud &s2,
                 const DcdParams &params = {}, Exec exec = Exec::parallel);

/// Density-aware Chamfer distance for clouds of different sizes. Orients the
/// pair so the first cloud is the larger one (reported via `swapped`; the
/// per-point vectors still follow the caller's argument order).
MetricReport dcd_unequal(const PointCloud &s1, const PointCloud &s2,
                         const DcdParams &params, UnequalVariant variant,
                         Exec exec = Exec::parallel);

/// Pointwise exp(-alpha * d) with d the distance or squared distance.
inline double dcd_kernel(double squared_dist, const DcdParams &params) {
  const double d = params.mode == ExponentMode::squared ? squared_dist
                                                        : std::sqrt(squared_dist);
  return std::exp(-params.alpha * d);
}

std::string_view to_string(ChamferVariant v);
std::string_view to_string(ExponentMode m);
std::string_view to_string(UnequalVariant v);

} // namespace pcsim

#endif // PCSIM_METRICS_HPP
