#ifndef PCSIM_DEGRADE_HPP
#define PCSIM_DEGRADE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "pcsim/point_cloud.hpp"

namespace pcsim {

/// Seeded recipe for a degraded copy of a ground-truth cloud.
///
/// noise_sigma is expressed in units of the mean nearest-neighbour spacing
/// of a target_size sample of the ground truth; the absolute standard
/// deviation is noise_sigma * spacing.
struct DegradationSpec {
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;
  std::size_t imbalance_n = 2048;
  double partial_keep_fraction = 0.5;
  double outlier_fraction = 0.0;
  double outlier_radius = 1.0;
  double curvature_ratio = 0.0;
  std::size_t target_size = 2048;

  /// Throws InvalidParameter when a field is out of range.
  void validate() const;
};

enum class ShapeKind { sphere, torus, box, lshape };

std::string_view to_string(ShapeKind kind);
ShapeKind shape_from_string(std::string_view name);

struct SyntheticShape {
  PointCloud cloud;
  std::vector<double> curvature; ///< non-negative proxy, aligned with cloud
};

/// Area-uniform surface samples (shapes fit in a ~unit box centred at the
/// origin) with an analytic curvature proxy. Requires n >= 64.
SyntheticShape synth_shapes(ShapeKind kind, std::size_t n, std::uint64_t seed);

/// Mean nearest-neighbour spacing a target_size sample of `gt` would have,
/// estimated from gt's own spacing scaled by sqrt(|gt| / target_size).
double reference_spacing(const PointCloud &gt, std::size_t target_size);

/// Complete-but-noisy component of imbalance_n points plus a clean partial
/// component of target_size points (half-space cut keeping
/// partial_keep_fraction of gt), merged and reduced to target_size by FPS.
PointCloud mix_noise_imbalance(const PointCloud &gt, const DegradationSpec &spec);

/// Same, with the spacing used for the noise scale supplied by the caller.
PointCloud mix_noise_imbalance(const PointCloud &gt, const DegradationSpec &spec,
                               double spacing);

/// Replaces floor(fraction * n) seeded points with points on a shell of
/// radius ~`radius` around the centroid.
PointCloud inject_outliers(const PointCloud &cloud, double fraction, double radius,
                           std::uint64_t seed);

/// floor(R_c * m) points drawn without replacement with probability
/// proportional to curvature; the rest by FPS over the remaining points.
PointCloud curvature_mix_sample(const PointCloud &gt_dense,
                                std::span<const double> curvatures, double r_c,
                                std::size_t m, std::uint64_t seed);

} // namespace pcsim

#endif // PCSIM_DEGRADE_HPP
