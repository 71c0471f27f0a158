#ifndef PCSIM_DSAMPLE_HPP
#define PCSIM_DSAMPLE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcsim/neighbor_index.hpp"
#include "pcsim/point_cloud.hpp"

namespace pcsim {

/// Cloud with one importance score per point (lower = more important).
struct ScoredCloud {
  PointCloud cloud;
  std::vector<double> scores;

  /// Throws ShapeMismatch / NonFinite.
  void validate() const;
};

struct SamplerParams {
  double beta = 9.0;
  double gamma = 1.0;
  double t = 1.0;        ///< distance scale in the importance target
  std::size_t upscale = 2;

  void validate() const;
};

/// Importance target per coarse point. n_x counts the gt points whose nearest
/// coarse point is x. Unqueried points get t times their distance to gt;
/// queried points get -log2(|coarse| / |gt| * n_x + 1).
std::vector<double> g_target(const PointCloud &coarse, const PointCloud &gt,
                             const NeighborIndex &gt_index, double t);

/// t that maps the 95th percentile of the unqueried points' distances to +2.
/// Returns 1 when every coarse point is queried.
double default_t(const PointCloud &coarse, const PointCloud &gt,
                 const NeighborIndex &gt_index);

/// Mean absolute difference between predicted and target scores.
double score_loss(std::span<const double> predicted, std::span<const double> target);

/// 1 / (1 + exp(beta * z + gamma)).
double existence_prob(double z, double beta, double gamma);

/// Produces per-point scores; `gt` is only available to oracle scorers.
class Scorer {
public:
  virtual ~Scorer() = default;
  virtual std::string name() const = 0;
  virtual bool needs_ground_truth() const { return false; }
  virtual std::vector<double> score(const PointCloud &cloud,
                                    const PointCloud *gt) const = 0;
};

/// z = g_target(cloud, gt). A t of 0 means default_t.
class OracleScorer : public Scorer {
public:
  explicit OracleScorer(double t = 0.0) : t_(t) {}
  std::string name() const override { return "oracle"; }
  bool needs_ground_truth() const override { return true; }
  std::vector<double> score(const PointCloud &cloud,
                            const PointCloud *gt) const override;

private:
  double t_;
};

/// Same score for every point (ablation baseline).
class ConstantScorer : public Scorer {
public:
  explicit ConstantScorer(double value = 0.0) : value_(value) {}
  std::string name() const override { return "constant"; }
  std::vector<double> score(const PointCloud &cloud,
                            const PointCloud *gt) const override;

private:
  double value_;
};

/// Wraps scores computed elsewhere, e.g. by an externally trained model
/// behind the foreign-function layer.
class ExternalScorer : public Scorer {
public:
  using Fn = std::function<std::vector<double>(const PointCloud &)>;
  ExternalScorer(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  std::string name() const override { return name_; }
  std::vector<double> score(const PointCloud &cloud,
                            const PointCloud *gt) const override;

private:
  std::string name_;
  Fn fn_;
};

/// "oracle", "oracle:<t>", "constant", "constant:<z>".
std::unique_ptr<Scorer> make_scorer(const std::string &spec);

ScoredCloud score_cloud(const Scorer &scorer, const PointCloud &cloud,
                        const PointCloud *gt = nullptr);

struct GuidedResult {
  PointCloud cloud;                 ///< the m output points
  PointCloud upsampled;             ///< coarse+ (coarse replicated s times)
  std::vector<double> probability;  ///< per coarse+ point
  std::vector<char> kept;           ///< Bernoulli outcome per coarse+ point
  std::size_t refilled = 0;         ///< points added back by the fallback
};

/// Up-samples the coarse cloud by `upscale` (jittered replicas sharing the
/// parent's probability), thins each replica independently with probability
/// existence_prob(z), merges the survivors with `rec` and reduces to m points
/// by FPS. If fewer than m points survive, the dropped replicas with the
/// highest probability are restored first.
GuidedResult guided_downsample_detailed(const ScoredCloud &coarse_scored,
                                        const PointCloud &rec,
                                        const SamplerParams &params, std::size_t m,
                                        std::uint64_t seed);

PointCloud guided_downsample(const ScoredCloud &coarse_scored, const PointCloud &rec,
                             const SamplerParams &params, std::size_t m,
                             std::uint64_t seed);

/// Replication step on its own; jitter sigma is 0.25 x mean NN spacing of
/// `coarse`. upscale == 1 returns the cloud unchanged.
PointCloud upsample_jittered(const PointCloud &coarse, std::size_t upscale,
                             std::uint64_t seed);

} // namespace pcsim

#endif // PCSIM_DSAMPLE_HPP
