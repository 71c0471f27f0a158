#include "pcsim/dsample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "pcsim/metrics.hpp"
#include "pcsim/rng.hpp"
#include "pcsim/sampling.hpp"

namespace pcsim {

void ScoredCloud::validate() const {
  if (scores.size() != cloud.size()) {
    throw Error(ErrorCode::ShapeMismatch, "scores not aligned with points");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw Error(ErrorCode::NonFinite, "score " + std::to_string(i) + " is not finite");
    }
  }
}

void SamplerParams::validate() const {
  if (!std::isfinite(beta) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidParameter, "beta and gamma must be finite");
  }
  if (!(t > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "t must be positive");
  }
  if (upscale < 1) {
    throw Error(ErrorCode::InvalidParameter, "upscale must be >= 1");
  }
}

std::vector<double> g_target(const PointCloud &coarse, const PointCloud &gt,
                             const NeighborIndex &gt_index, double t) {
  const NeighborIndex coarse_index(coarse);
  const auto freq = query_frequencies(gt, coarse_index);
  const double ratio =
      static_cast<double>(coarse.size()) / static_cast<double>(gt.size());
  std::vector<double> g(coarse.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const auto n_x = freq.counts[i];
    if (n_x == 0) {
      g[i] = gt_index.nearest_one(coarse[i]).distance() * t;
    } else {
      g[i] = -std::log2(ratio * static_cast<double>(n_x) + 1.0);
    }
  }
  return g;
}

double default_t(const PointCloud &coarse, const PointCloud &gt,
                 const NeighborIndex &gt_index) {
  const NeighborIndex coarse_index(coarse);
  const auto freq = query_frequencies(gt, coarse_index);
  std::vector<double> dists;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    if (freq.counts[i] == 0) {
      dists.push_back(gt_index.nearest_one(coarse[i]).distance());
    }
  }
  if (dists.empty()) {
    return 1.0;
  }
  std::sort(dists.begin(), dists.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(dists.size())));
  const double q95 = dists[std::max<std::size_t>(rank, 1) - 1];
  return q95 > 0.0 ? 2.0 / q95 : 1.0;
}

double score_loss(std::span<const double> predicted, std::span<const double> target) {
  if (predicted.size() != target.size()) {
    throw Error(ErrorCode::ShapeMismatch, "score and target lengths differ");
  }
  if (predicted.empty()) {
    throw Error(ErrorCode::EmptyCloud, "no scores");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    sum += std::abs(predicted[i] - target[i]);
  }
  return sum / static_cast<double>(predicted.size());
}

double existence_prob(double z, double beta, double gamma) {
  return 1.0 / (1.0 + std::exp(beta * z + gamma));
}

std::vector<double> OracleScorer::score(const PointCloud &cloud,
                                        const PointCloud *gt) const {
  if (gt == nullptr) {
    throw Error(ErrorCode::InvalidParameter, "oracle scorer needs a ground truth");
  }
  const NeighborIndex gt_index(*gt);
  const double t = t_ > 0.0 ? t_ : default_t(cloud, *gt, gt_index);
  return g_target(cloud, *gt, gt_index, t);
}

std::vector<double> ConstantScorer::score(const PointCloud &cloud,
                                          const PointCloud *) const {
  return std::vector<double>(cloud.size(), value_);
}

std::vector<double> ExternalScorer::score(const PointCloud &cloud,
                                          const PointCloud *) const {
  auto z = fn_(cloud);
  if (z.size() != cloud.size()) {
    throw Error(ErrorCode::ShapeMismatch,
                "scorer '" + name_ + "' returned " + std::to_string(z.size()) +
                    " scores for " + std::to_string(cloud.size()) + " points");
  }
  return z;
}

std::unique_ptr<Scorer> make_scorer(const std::string &spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  double arg = 0.0;
  if (colon != std::string::npos) {
    try {
      arg = std::stod(spec.substr(colon + 1));
    } catch (const std::exception &) {
      throw Error(ErrorCode::InvalidParameter, "bad scorer argument in '" + spec + "'");
    }
  }
  if (name == "oracle") {
    return std::make_unique<OracleScorer>(arg);
  }
  if (name == "constant") {
    return std::make_unique<ConstantScorer>(arg);
  }
  throw Error(ErrorCode::InvalidParameter, "unknown scorer '" + name + "'");
}

ScoredCloud score_cloud(const Scorer &scorer, const PointCloud &cloud,
                        const PointCloud *gt) {
  ScoredCloud out{cloud, scorer.score(cloud, gt)};
  out.validate();
  return out;
}

PointCloud upsample_jittered(const PointCloud &coarse, std::size_t upscale,
                             std::uint64_t seed) {
  if (upscale < 1) {
    throw Error(ErrorCode::InvalidParameter, "upscale must be >= 1");
  }
  if (upscale == 1) {
    return coarse;
  }
  const double sigma = 0.25 * mean_nn_spacing(coarse);
  Rng rng(derive_seed({seed, 0x7570}));
  std::normal_distribution<double> gauss(0.0, sigma > 0.0 ? sigma : 1.0);
  std::vector<Point3> pts;
  pts.reserve(coarse.size() * upscale);
  for (const auto &p : coarse) {
    for (std::size_t r = 0; r < upscale; ++r) {
      Point3 q = p;
      if (sigma > 0.0) {
        q += Point3{gauss(rng), gauss(rng), gauss(rng)};
      }
      pts.push_back(q);
    }
  }
  return PointCloud(std::move(pts));
}

GuidedResult guided_downsample_detailed(const ScoredCloud &coarse_scored,
                                        const PointCloud &rec,
                                        const SamplerParams &params, std::size_t m,
                                        std::uint64_t seed) {
  coarse_scored.validate();
  params.validate();
  if (m < 1) {
    throw Error(ErrorCode::InvalidCount, "m must be >= 1");
  }
  const std::size_t s = params.upscale;
  PointCloud up = upsample_jittered(coarse_scored.cloud, s, seed);

  const std::size_t n_up = up.size();
  std::vector<double> prob(n_up);
  std::vector<char> kept(n_up);
  const std::uint64_t stream = derive_seed({seed, 0x7468696e});
  for (std::size_t i = 0; i < n_up; ++i) {
    prob[i] = existence_prob(coarse_scored.scores[i / s], params.beta, params.gamma);
    kept[i] = counter_uniform(stream, i) < prob[i] ? 1 : 0;
  }

  std::vector<Point3> merged;
  merged.reserve(n_up + rec.size());
  for (std::size_t i = 0; i < n_up; ++i) {
    if (kept[i]) {
      merged.push_back(up[i]);
    }
  }
  merged.insert(merged.end(), rec.begin(), rec.end());

  std::size_t refilled = 0;
  if (merged.size() < m) {
    std::vector<std::size_t> dropped;
    for (std::size_t i = 0; i < n_up; ++i) {
      if (!kept[i]) {
        dropped.push_back(i);
      }
    }
    std::stable_sort(dropped.begin(), dropped.end(),
                     [&](std::size_t a, std::size_t b) { return prob[a] > prob[b]; });
    for (auto i : dropped) {
      if (merged.size() >= m) {
        break;
      }
      merged.push_back(up[i]);
      ++refilled;
    }
    if (merged.size() < m) {
      throw Error(ErrorCode::InsufficientPoints,
                  "only " + std::to_string(merged.size()) +
                      " candidate points for m=" + std::to_string(m));
    }
  }

  PointCloud out = fps(PointCloud(std::move(merged)), m, 0);
  return {std::move(out), std::move(up), std::move(prob), std::move(kept), refilled};
}

PointCloud guided_downsample(const ScoredCloud &coarse_scored, const PointCloud &rec,
                             const SamplerParams &params, std::size_t m,
                             std::uint64_t seed) {
  return guided_downsample_detailed(coarse_scored, rec, params, m, seed).cloud;
}

} // namespace pcsim
