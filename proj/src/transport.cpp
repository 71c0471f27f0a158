#include "pcsim/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pcsim {

namespace {

constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
constexpr double inf = std::numeric_limits<double>::infinity();

void check_sizes(const PointCloud &s1, const PointCloud &s2) {
  if (s1.size() != s2.size()) {
    throw Error(ErrorCode::CardinalityMismatch,
                "transport needs equal sizes (" + std::to_string(s1.size()) +
                    " vs " + std::to_string(s2.size()) + ")");
  }
}

} // namespace

std::vector<double> cost_matrix(const PointCloud &s1, const PointCloud &s2,
                                Exec exec) {
  const std::size_t n = s1.size();
  const std::size_t m = s2.size();
  std::vector<double> c(n * m);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const auto u = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < m; ++j) {
      c[u * m + j] = distance(s1[u], s2[j]);
    }
  }
  return c;
}

double assignment_cost(const PointCloud &s1, const PointCloud &s2,
                       const std::vector<std::size_t> &mapping) {
  double total = 0.0;
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    total += distance(s1[i], s2[mapping[i]]);
  }
  return total;
}

double emd_value(const AssignmentResult &result, EmdNormalize normalize) {
  if (normalize == EmdNormalize::sum || result.mapping.empty()) {
    return result.total_cost;
  }
  return result.total_cost / static_cast<double>(result.mapping.size());
}

AssignmentResult emd_exact(const PointCloud &s1, const PointCloud &s2) {
  check_sizes(s1, s2);
  const std::size_t n = s1.size();
  if (n > emd_exact_max_size) {
    throw Error(ErrorCode::SizeLimitExceeded,
                "exact assignment limited to " +
                    std::to_string(emd_exact_max_size) + " points");
  }
  const auto c = cost_matrix(s1, s2, Exec::serial);

  // Potentials u (rows) and v (columns); p[j] is the row matched to column j.
  // Index 0 is a virtual column used as the root of each augmenting search.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) {
          continue;
        }
        const double cur = c[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  AssignmentResult r;
  r.mapping.assign(n, none);
  for (std::size_t j = 1; j <= n; ++j) {
    r.mapping[p[j] - 1] = j - 1;
  }
  r.total_cost = assignment_cost(s1, s2, r.mapping);
  r.lower_bound = r.total_cost;
  r.iterations = n;
  return r;
}

AssignmentResult emd_approx(const PointCloud &s1, const PointCloud &s2,
                            double eps, std::size_t max_iters, Exec exec) {
  check_sizes(s1, s2);
  if (!(eps > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "eps must be positive");
  }
  if (max_iters == 0) {
    throw Error(ErrorCode::InvalidParameter, "max_iters must be positive");
  }
  const std::size_t n = s1.size();
  const auto c = cost_matrix(s1, s2, exec);
  const auto rows = static_cast<std::ptrdiff_t>(n);

  double c_max = 0.0;
  std::vector<double> row_min(n, inf), col_min(n, inf);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double cij = c[i * n + j];
      c_max = std::max(c_max, cij);
      row_min[i] = std::min(row_min[i], cij);
      col_min[j] = std::min(col_min[j], cij);
    }
  }
  double lb_rows = 0.0, lb_cols = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lb_rows += row_min[i];
    lb_cols += col_min[i];
  }
  const double lb_simple = std::max(lb_rows, lb_cols);

  AssignmentResult r;
  std::vector<std::size_t> owner(n, none);
  r.mapping.assign(n, none);

  if (n == 1 || c_max == 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      r.mapping[i] = i;
    }
    r.total_cost = assignment_cost(s1, s2, r.mapping);
    r.lower_bound = r.total_cost;
    return r;
  }

  const double eps_final =
      std::max(eps * lb_simple / static_cast<double>(n), 1e-9 * c_max);
  constexpr double scale_factor = 5.0;
  double eps_phase = std::max(c_max / scale_factor, eps_final);

  std::vector<double> price(n, 0.0);
  std::vector<std::size_t> bid_target(n);
  std::vector<double> bid_value(n);
  std::vector<double> best_bid(n, -inf);
  std::vector<std::size_t> best_bidder(n, none);
  std::vector<std::size_t> unassigned;
  unassigned.reserve(n);

  for (;;) {
    std::fill(owner.begin(), owner.end(), none);
    std::fill(r.mapping.begin(), r.mapping.end(), none);
    std::size_t bids = 0;
    bool phase_done = false;
    while (bids < max_iters * n) {
      unassigned.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (r.mapping[i] == none) {
          unassigned.push_back(i);
        }
      }
      if (unassigned.empty()) {
        phase_done = true;
        break;
      }
      bids += unassigned.size();

      // Bids are independent per person.
      const auto count = static_cast<std::ptrdiff_t>(unassigned.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
      for (std::ptrdiff_t t = 0; t < count; ++t) {
        const std::size_t i = unassigned[static_cast<std::size_t>(t)];
        const double *row = c.data() + i * n;
        double best = -inf, second = -inf;
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < n; ++j) {
          const double value = -row[j] - price[j];
          if (value > best) {
            second = best;
            best = value;
            best_j = j;
          } else if (value > second) {
            second = value;
          }
        }
        bid_target[i] = best_j;
        bid_value[i] = price[best_j] + (best - second) + eps_phase;
      }

      // Highest bid per object wins; ties to the lower person id.
      std::vector<std::size_t> touched;
      for (auto i : unassigned) {
        const auto j = bid_target[i];
        if (best_bidder[j] == none) {
          touched.push_back(j);
        }
        if (bid_value[i] > best_bid[j]) {
          best_bid[j] = bid_value[i];
          best_bidder[j] = i;
        }
      }
      for (auto j : touched) {
        if (owner[j] != none) {
          r.mapping[owner[j]] = none;
        }
        owner[j] = best_bidder[j];
        r.mapping[best_bidder[j]] = j;
        price[j] = best_bid[j];
        best_bid[j] = -inf;
        best_bidder[j] = none;
      }
    }
    r.iterations += (bids + n - 1) / n;
    if (!phase_done) {
      r.converged = false;
      break;
    }
    if (eps_phase <= eps_final) {
      break;
    }
    eps_phase = std::max(eps_phase / scale_factor, eps_final);
  }

  if (!r.converged) {
    // Complete the partial matching greedily, persons in index order.
    for (std::size_t i = 0; i < n; ++i) {
      if (r.mapping[i] != none) {
        continue;
      }
      std::size_t best_j = none;
      for (std::size_t j = 0; j < n; ++j) {
        if (owner[j] == none &&
            (best_j == none || c[i * n + j] < c[i * n + best_j])) {
          best_j = j;
        }
      }
      owner[best_j] = i;
      r.mapping[i] = best_j;
    }
  }

  // Dual bound from the final prices: opt >= sum_i min_j (c_ij + p_j) - sum p.
  std::vector<double> reduced(n);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const auto u = static_cast<std::size_t>(i);
    double best = inf;
    for (std::size_t j = 0; j < n; ++j) {
      best = std::min(best, c[u * n + j] + price[j]);
    }
    reduced[u] = best;
  }
  double dual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dual += reduced[i] - price[i];
  }

  r.total_cost = assignment_cost(s1, s2, r.mapping);
  r.lower_bound = std::min(std::max(dual, lb_simple), r.total_cost);
  r.approx_error =
      r.total_cost > 0.0 ? (r.total_cost - r.lower_bound) / r.total_cost : 0.0;
  return r;
}

} // namespace pcsim
