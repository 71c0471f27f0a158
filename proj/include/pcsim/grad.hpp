#ifndef PCSIM_GRAD_HPP
#define PCSIM_GRAD_HPP

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "pcsim/metrics.hpp"
#include "pcsim/parallel.hpp"
#include "pcsim/point_cloud.hpp"

namespace pcsim {

enum class LossKind { cd_t, cd_p, dcd };

enum class GradWrt { s1, s2, both };

/// Loss value and d(loss)/d(coordinates). The gradient of a cloud that was
/// not requested is left empty.
struct GradientField {
  double loss_value = 0.0;
  std::vector<Point3> grad_s1;
  std::vector<Point3> grad_s2;
};

/// Gradients under a frozen nearest-neighbour assignment: neighbour choices
/// and query counts are treated as constants, so at assignment switches the
/// result is one valid subgradient.
///
/// CD-T and CD-P equal chamfer(T) and chamfer(P). DCD always uses the
/// squared-distance kernel with frequency weights n^lambda, and equals
/// dcd(s1, s2) for equal sizes. Unequal sizes fall back to the naive
/// unequal-size form, which stays differentiable in the distances.
GradientField loss_and_grad(const PointCloud &s1, const PointCloud &s2,
                            LossKind loss, const DcdParams &params = {},
                            GradWrt wrt = GradWrt::both,
                            Exec exec = Exec::parallel);

double loss_value(const PointCloud &s1, const PointCloud &s2, LossKind loss,
                  const DcdParams &params = {}, Exec exec = Exec::parallel);

struct ProfilePoint {
  double l = 0.0;
  double grad = 0.0;
};

/// Per-pair gradient magnitude as a function of the pair distance l, before
/// any averaging: CD-T 2l, CD-P 1, DCD 2*alpha*l*exp(-alpha*l^2) / n^lambda.
std::vector<ProfilePoint> gradient_profile(LossKind loss, const DcdParams &params,
                                           std::span<const double> l_grid,
                                           std::size_t n = 1);

/// Location of the DCD profile maximum, 1 / sqrt(2 alpha).
double dcd_profile_peak(double alpha);

/// Central finite-difference comparison against loss_and_grad.
struct FdCheck {
  /// max over components of |a - f| / max(|a|, |f|, floor), where floor is
  /// 1e-4 of the largest analytic component.
  double max_rel_error = 0.0;
  /// A +-h perturbation changed some nearest-neighbour id, so the analytic
  /// gradient is only a subgradient there.
  bool assignment_switched = false;
  std::size_t components = 0;
};

FdCheck finite_difference_check(const PointCloud &s1, const PointCloud &s2,
                                LossKind loss, const DcdParams &params,
                                GradWrt wrt = GradWrt::both, double h = 1e-6);

std::string_view to_string(LossKind loss);

} // namespace pcsim

#endif // PCSIM_GRAD_HPP
