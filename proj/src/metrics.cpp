#include "pcsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pcsim {

void DcdParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidParameter, "alpha must be positive and finite");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "lambda must lie in [0, 1]");
  }
}

std::size_t QueryFrequency::total() const {
  std::size_t t = 0;
  for (auto c : counts) {
    t += c;
  }
  return t;
}

std::string_view to_string(ChamferVariant v) {
  return v == ChamferVariant::T ? "T" : "P";
}
std::string_view to_string(ExponentMode m) {
  return m == ExponentMode::squared ? "squared" : "euclidean";
}
std::string_view to_string(UnequalVariant v) {
  return v == UnequalVariant::naive ? "naive" : "e";
}

QueryFrequency frequencies_from_ids(const std::vector<std::size_t> &ids,
                                    std::size_t target_size) {
  QueryFrequency f;
  f.counts.assign(target_size, 0);
  for (auto id : ids) {
    ++f.counts[id];
  }
  return f;
}

QueryFrequency query_frequencies(const PointCloud &src,
                                 const NeighborIndex &tgt_index, Exec exec) {
  const auto pass = nearest_pass(src, tgt_index, exec);
  return frequencies_from_ids(pass.ids, tgt_index.size());
}

namespace {

double ordered_sum(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v) {
    s += x;
  }
  return s;
}

} // namespace

MetricReport chamfer(const PointCloud &s1, const PointCloud &s2,
                     ChamferVariant variant, Exec exec) {
  const NeighborIndex idx1(s1);
  const NeighborIndex idx2(s2);
  const auto fwd = nearest_pass(s1, idx2, exec);
  const auto bwd = nearest_pass(s2, idx1, exec);

  auto term = [&](const NearestPass &pass) {
    const double inv_n = 1.0 / static_cast<double>(pass.ids.size());
    std::vector<double> out(pass.ids.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double sq = pass.squared_distances[i];
      out[i] = (variant == ChamferVariant::T ? sq : std::sqrt(sq)) * inv_n;
    }
    return out;
  };

  MetricReport r;
  r.per_point_src = term(fwd);
  r.per_point_tgt = term(bwd);
  // Each direction is summed on its own so that swapping the arguments
  // reproduces the value exactly.
  r.value = ordered_sum(r.per_point_src) + ordered_sum(r.per_point_tgt);
  r.src_to_tgt = frequencies_from_ids(fwd.ids, s2.size());
  r.tgt_to_src = frequencies_from_ids(bwd.ids, s1.size());
  return r;
}

double hausdorff(const PointCloud &s1, const PointCloud &s2, Exec exec) {
  const NeighborIndex idx1(s1);
  const NeighborIndex idx2(s2);
  const auto fwd = nearest_pass(s1, idx2, exec);
  const auto bwd = nearest_pass(s2, idx1, exec);
  double worst = 0.0;
  for (double d : fwd.squared_distances) {
    worst = std::max(worst, d);
  }
  for (double d : bwd.squared_distances) {
    worst = std::max(worst, d);
  }
  return std::sqrt(worst);
}

namespace {

enum class Weighting { plain, naive, E };

// Shared evaluation for dcd (eta == 1) and both unequal-size variants.
// `big` has eta times as many points as `small`.
MetricReport dcd_oriented(const PointCloud &big, const PointCloud &small,
                          const DcdParams &params, Weighting weighting,
                          Exec exec) {
  const std::size_t n_big = big.size();
  const std::size_t n_small = small.size();
  const double eta = static_cast<double>(n_big) / static_cast<double>(n_small);
  const std::size_t eta_ceil = (n_big + n_small - 1) / n_small;

  const NeighborIndex small_index(small);
  const NeighborIndex big_index(big);

  MetricReport r;

  // Big -> small: each x finds its nearest y; y's query count scales the
  // kernel.
  const auto fwd = nearest_pass(big, small_index, exec);
  r.src_to_tgt = frequencies_from_ids(fwd.ids, n_small);
  r.per_point_src.resize(n_big);
  for (std::size_t i = 0; i < n_big; ++i) {
    const double n_y = std::pow(
        static_cast<double>(r.src_to_tgt.counts[fwd.ids[i]]), params.lambda);
    double w = eta / n_y;
    if (weighting == Weighting::E) {
      w = std::min(w, 1.0);
    }
    const double k = dcd_kernel(fwd.squared_distances[i], params);
    r.per_point_src[i] = (1.0 - w * k) / (2.0 * static_cast<double>(n_big));
  }

  // Small -> big. For E each y averages over its ceil(eta) nearest x, and the
  // count for x is how many y hold x in that neighbour set (the plain query
  // frequency when ceil(eta) == 1).
  r.per_point_tgt.resize(n_small);
  if (weighting == Weighting::E) {
    const auto knn = knn_pass(small, big_index, eta_ceil, exec);
    const std::size_t k = knn.k;
    std::vector<std::size_t> ids(knn.neighbors.size());
    std::transform(knn.neighbors.begin(), knn.neighbors.end(), ids.begin(),
                   [](const Neighbor &nb) { return nb.id; });
    r.tgt_to_src = frequencies_from_ids(ids, n_big);
    const double k_eta = static_cast<double>(eta_ceil);
    for (std::size_t j = 0; j < n_small; ++j) {
      double acc = 0.0;
      for (std::size_t a = 0; a < k; ++a) {
        const auto &nb = knn.neighbors[j * k + a];
        const double m = std::pow(static_cast<double>(r.tgt_to_src.counts[nb.id]),
                                  params.lambda);
        acc += (1.0 / (k_eta * m)) * dcd_kernel(nb.squared_distance, params);
      }
      r.per_point_tgt[j] = (1.0 - acc) / (2.0 * static_cast<double>(n_small));
    }
  } else {
    const auto bwd = nearest_pass(small, big_index, exec);
    r.tgt_to_src = frequencies_from_ids(bwd.ids, n_big);
    for (std::size_t j = 0; j < n_small; ++j) {
      const double n_x = std::pow(
          static_cast<double>(r.tgt_to_src.counts[bwd.ids[j]]), params.lambda);
      const double w = 1.0 / (eta * n_x);
      const double k = dcd_kernel(bwd.squared_distances[j], params);
      r.per_point_tgt[j] = (1.0 - w * k) / (2.0 * static_cast<double>(n_small));
    }
  }

  r.value = ordered_sum(r.per_point_src) + ordered_sum(r.per_point_tgt);
  if (weighting != Weighting::naive) {
    // rounding drift
    r.value = std::clamp(r.value, 0.0, 1.0);
  }
  return r;
}

MetricReport unswap(MetricReport r) {
  std::swap(r.per_point_src, r.per_point_tgt);
  std::swap(r.src_to_tgt, r.tgt_to_src);
  r.swapped = true;
  return r;
}

} // namespace

MetricReport dcd(const PointCloud &s1, const PointCloud &s2,
                 const DcdParams &params, Exec exec) {
  params.validate();
  if (s1.size() != s2.size()) {
    throw Error(ErrorCode::CardinalityMismatch,
                "dcd needs equal sizes (" + std::to_string(s1.size()) + " vs " +
                    std::to_string(s2.size()) +
                    "); use the unequal-size variant");
  }
  return dcd_oriented(s1, s2, params, Weighting::plain, exec);
}

MetricReport dcd_unequal(const PointCloud &s1, const PointCloud &s2,
                         const DcdParams &params, UnequalVariant variant,
                         Exec exec) {
  params.validate();
  const auto weighting =
      variant == UnequalVariant::E ? Weighting::E : Weighting::naive;
  if (s1.size() >= s2.size()) {
    return dcd_oriented(s1, s2, params, weighting, exec);
  }
  return unswap(dcd_oriented(s2, s1, params, weighting, exec));
}

} // namespace pcsim
