#ifndef PCSIM_TRANSPORT_HPP
#define PCSIM_TRANSPORT_HPP

#include <cstddef>
#include <vector>

#include "pcsim/parallel.hpp"
#include "pcsim/point_cloud.hpp"

namespace pcsim {

/// One-to-one matching between two equal-size clouds.
struct AssignmentResult {
  std::vector<std::size_t> mapping; ///< mapping[source id] = target id
  double total_cost = 0.0;          ///< sum of Euclidean distances over pairs
  std::size_t iterations = 0;
  /// (total_cost - lower_bound) / total_cost; 0 for the exact solver.
  double approx_error = 0.0;
  /// Certified lower bound on the optimal cost.
  double lower_bound = 0.0;
  bool converged = true;
};

enum class EmdNormalize { sum, mean };

inline constexpr std::size_t emd_exact_max_size = 512;

/// Optimal assignment by shortest augmenting paths, O(n^3).
/// Throws CardinalityMismatch or SizeLimitExceeded (n > 512).
AssignmentResult emd_exact(const PointCloud &s1, const PointCloud &s2);

/// Auction assignment with epsilon scaling. `eps` is the target relative
/// error: the final bid increment is eps * L / n with L a lower bound on the
/// optimal cost, so a converged run satisfies cost <= (1 + eps) * optimum.
/// One iteration is n bids of work (a full Jacobi round early on, many small
/// rounds near the end of a phase). `max_iters` caps iterations per scaling
/// phase; when it is hit the remaining persons are matched greedily and
/// `converged` is false.
AssignmentResult emd_approx(const PointCloud &s1, const PointCloud &s2,
                            double eps = 0.004, std::size_t max_iters = 3000,
                            Exec exec = Exec::parallel);

double emd_value(const AssignmentResult &result, EmdNormalize normalize);

/// Row-major n x n Euclidean cost matrix.
std::vector<double> cost_matrix(const PointCloud &s1, const PointCloud &s2,
                                Exec exec = Exec::parallel);

double assignment_cost(const PointCloud &s1, const PointCloud &s2,
                       const std::vector<std::size_t> &mapping);

} // namespace pcsim

#endif // PCSIM_TRANSPORT_HPP
