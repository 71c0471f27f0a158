#include "pcsim/grad.hpp"

#include <algorithm>
#include <cmath>

#include "pcsim/neighbor_index.hpp"

namespace pcsim {

std::string_view to_string(LossKind loss) {
  switch (loss) {
  case LossKind::cd_t:
    return "cd-t";
  case LossKind::cd_p:
    return "cd-p";
  case LossKind::dcd:
    return "dcd";
  }
  return "?";
}

namespace {

struct Evaluation {
  double loss = 0.0;
  std::vector<std::size_t> ids_ab; // nearest in b for each a
  std::vector<std::size_t> ids_ba; // nearest in a for each b
  std::vector<Point3> grad_a;
  std::vector<Point3> grad_b;
};

// Loss over (a, b) where for DCD `a` is the larger (or equal) cloud. The
// per-point expressions mirror metrics.cpp so loss values agree bit for bit.
Evaluation evaluate(const PointCloud &a, const PointCloud &b, LossKind loss,
                    const DcdParams &params, bool want_grad, Exec exec) {
  const NeighborIndex index_a(a);
  const NeighborIndex index_b(b);
  const auto fwd = nearest_pass(a, index_b, exec);
  const auto bwd = nearest_pass(b, index_a, exec);

  const std::size_t na = a.size();
  const std::size_t nb = b.size();

  Evaluation ev;
  if (want_grad) {
    ev.grad_a.assign(na, Point3{});
    ev.grad_b.assign(nb, Point3{});
  }

  // One directed term: points `p` of cloud P query `q` of cloud Q.
  auto directed = [&](const PointCloud &p, const PointCloud &q,
                      const NearestPass &pass, std::vector<Point3> &grad_p,
                      std::vector<Point3> &grad_q, double eta_num,
                      double eta_den) {
    const std::size_t n = p.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> counts;
    if (loss == LossKind::dcd) {
      counts.assign(q.size(), 0.0);
      for (auto id : pass.ids) {
        counts[id] += 1.0;
      }
    }
    double term = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = pass.ids[i];
      const double sq = pass.squared_distances[i];
      Point3 g; // d(contribution)/d(p_i); the partner gets -g
      switch (loss) {
      case LossKind::cd_t:
        term += sq * inv_n;
        if (want_grad) {
          g = (p[i] - q[j]) * (2.0 * inv_n);
        }
        break;
      case LossKind::cd_p: {
        const double d = std::sqrt(sq);
        term += d * inv_n;
        if (want_grad && d > 0.0) {
          g = (p[i] - q[j]) * (inv_n / d);
        }
        break;
      }
      case LossKind::dcd: {
        const double w = eta_num / (eta_den * std::pow(counts[j], params.lambda));
        const double k = std::exp(-params.alpha * sq);
        term += (1.0 - w * k) / (2.0 * static_cast<double>(n));
        if (want_grad) {
          g = (p[i] - q[j]) * (w * k * params.alpha * inv_n);
        }
        break;
      }
      }
      if (want_grad) {
        grad_p[i] += g;
        grad_q[j] -= g;
      }
    }
    return term;
  };

  const double eta = static_cast<double>(na) / static_cast<double>(nb);
  const double t1 = directed(a, b, fwd, ev.grad_a, ev.grad_b, eta, 1.0);
  const double t2 = directed(b, a, bwd, ev.grad_b, ev.grad_a, 1.0, eta);
  ev.loss = t1 + t2;
  ev.ids_ab = fwd.ids;
  ev.ids_ba = bwd.ids;
  return ev;
}

// Orients the pair for DCD (larger cloud first) and maps results back.
Evaluation evaluate_oriented(const PointCloud &s1, const PointCloud &s2,
                             LossKind loss, const DcdParams &params,
                             bool want_grad, Exec exec) {
  if (loss == LossKind::dcd) {
    params.validate();
  }
  if (loss == LossKind::dcd && s1.size() < s2.size()) {
    auto ev = evaluate(s2, s1, loss, params, want_grad, exec);
    std::swap(ev.grad_a, ev.grad_b);
    std::swap(ev.ids_ab, ev.ids_ba);
    return ev;
  }
  return evaluate(s1, s2, loss, params, want_grad, exec);
}

} // namespace

GradientField loss_and_grad(const PointCloud &s1, const PointCloud &s2,
                            LossKind loss, const DcdParams &params, GradWrt wrt,
                            Exec exec) {
  auto ev = evaluate_oriented(s1, s2, loss, params, true, exec);
  GradientField out;
  out.loss_value = ev.loss;
  if (wrt != GradWrt::s2) {
    out.grad_s1 = std::move(ev.grad_a);
  }
  if (wrt != GradWrt::s1) {
    out.grad_s2 = std::move(ev.grad_b);
  }
  return out;
}

double loss_value(const PointCloud &s1, const PointCloud &s2, LossKind loss,
                  const DcdParams &params, Exec exec) {
  return evaluate_oriented(s1, s2, loss, params, false, exec).loss;
}

double dcd_profile_peak(double alpha) { return 1.0 / std::sqrt(2.0 * alpha); }

std::vector<ProfilePoint> gradient_profile(LossKind loss, const DcdParams &params,
                                           std::span<const double> l_grid,
                                           std::size_t n) {
  if (loss == LossKind::dcd) {
    params.validate();
  }
  if (n == 0) {
    throw Error(ErrorCode::InvalidCount, "query count n must be at least 1");
  }
  std::vector<ProfilePoint> out;
  out.reserve(l_grid.size());
  const double n_pow = std::pow(static_cast<double>(n), params.lambda);
  for (double l : l_grid) {
    if (!(l >= 0.0)) {
      throw Error(ErrorCode::InvalidParameter, "profile distances must be >= 0");
    }
    double g = 0.0;
    switch (loss) {
    case LossKind::cd_t:
      g = 2.0 * l;
      break;
    case LossKind::cd_p:
      g = 1.0;
      break;
    case LossKind::dcd:
      g = 2.0 * params.alpha * l * std::exp(-params.alpha * l * l) / n_pow;
      break;
    }
    out.push_back({l, g});
  }
  return out;
}

FdCheck finite_difference_check(const PointCloud &s1, const PointCloud &s2,
                                LossKind loss, const DcdParams &params,
                                GradWrt wrt, double h) {
  const auto base = evaluate_oriented(s1, s2, loss, params, true, Exec::serial);

  std::vector<double> analytic;
  std::vector<double> numeric;
  bool switched = false;

  auto probe = [&](bool first) {
    const PointCloud &cloud = first ? s1 : s2;
    const auto &grad = first ? base.grad_a : base.grad_b;
    std::vector<Point3> pts(cloud.begin(), cloud.end());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t axis = 0; axis < 3; ++axis) {
        const double orig = pts[i][axis];
        double values[2];
        for (int side = 0; side < 2; ++side) {
          pts[i][axis] = orig + (side == 0 ? h : -h);
          const PointCloud moved(pts);
          const auto ev =
              first ? evaluate_oriented(moved, s2, loss, params, false, Exec::serial)
                    : evaluate_oriented(s1, moved, loss, params, false, Exec::serial);
          if (ev.ids_ab != base.ids_ab || ev.ids_ba != base.ids_ba) {
            switched = true;
          }
          values[side] = ev.loss;
        }
        pts[i][axis] = orig;
        analytic.push_back(grad[i][axis]);
        numeric.push_back((values[0] - values[1]) / (2.0 * h));
      }
    }
  };
  if (wrt != GradWrt::s2) {
    probe(true);
  }
  if (wrt != GradWrt::s1) {
    probe(false);
  }

  double scale = 0.0;
  for (double a : analytic) {
    scale = std::max(scale, std::abs(a));
  }
  const double floor = std::max(1e-4 * scale, 1e-300);
  FdCheck out;
  out.assignment_switched = switched;
  out.components = analytic.size();
  for (std::size_t c = 0; c < analytic.size(); ++c) {
    const double a = analytic[c];
    const double f = numeric[c];
    const double denom = std::max({std::abs(a), std::abs(f), floor});
    out.max_rel_error = std::max(out.max_rel_error, std::abs(a - f) / denom);
  }
  return out;
}

} // namespace pcsim
