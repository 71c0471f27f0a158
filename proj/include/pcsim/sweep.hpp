#ifndef PCSIM_SWEEP_HPP
#define PCSIM_SWEEP_HPP

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "pcsim/degrade.hpp"
#include "pcsim/metrics.hpp"
#include "pcsim/parallel.hpp"

namespace pcsim {

enum class SweepKind {
  noise_imbalance, ///< rows: noise sigma, cols: imbalance level
  curvature_mix,   ///< one row, cols: curvature ratio R_c of the reference
};

/// Metric names: cd_t, cd_p, hd, dcd, emd.
struct SweepConfig {
  SweepKind kind = SweepKind::noise_imbalance;
  std::uint64_t master_seed = 1;
  std::size_t trials = 20;
  std::vector<ShapeKind> shapes{ShapeKind::sphere, ShapeKind::torus, ShapeKind::box,
                                ShapeKind::lshape};
  std::size_t dense_size = 16384;
  std::size_t target_size = 2048;
  /// Noise in units of the reference's mean NN spacing.
  std::vector<double> sigma{0.0, 0.5, 1.0, 2.0, 4.0};
  /// Size of the complete noisy component, listed from balanced to most
  /// imbalanced (fewer complete points = stronger density mismatch).
  std::vector<std::size_t> imbalance_n{4096, 2048, 1024, 512, 256};
  double partial_keep_fraction = 0.2;
  std::vector<double> r_c{0.0, 0.25, 0.5, 0.75};
  /// Noise on the uniform output of the curvature sweep (spacing units).
  double output_noise_sigma = 0.25;
  /// Sweep temperature; dist and the library default to 1000.
  DcdParams dcd{50.0};
  double emd_eps = 0.004;
  std::size_t emd_iters = 3000;
  std::vector<std::string> metrics{"cd_t", "hd", "emd", "dcd"};

  void validate() const;
  std::size_t rows() const;
  std::size_t cols() const;
};

struct SweepCell {
  std::size_t row = 0;
  std::size_t col = 0;
  double row_value = 0.0;
  double col_value = 0.0;
  std::vector<double> mean;                 ///< per metric
  std::vector<double> stddev;               ///< per metric, sample std
  std::vector<std::vector<double>> samples; ///< [metric][trial]
};

struct SweepReport {
  SweepConfig config;
  std::string row_axis;
  std::string col_axis;
  std::vector<double> row_values;
  std::vector<double> col_values;
  std::vector<SweepCell> cells; ///< row-major

  std::size_t metric_index(const std::string &name) const;
  const SweepCell &cell(std::size_t row, std::size_t col) const;
  double mean(std::size_t row, std::size_t col, const std::string &metric) const;
};

/// Ground truth reference and degraded cloud for one (cell, trial).
struct SweepPair {
  PointCloud reference;
  PointCloud degraded;
};

SweepPair sweep_pair(const SweepConfig &config, std::size_t row, std::size_t col,
                     std::size_t trial);

double evaluate_metric(const std::string &name, const PointCloud &degraded,
                       const PointCloud &reference, const SweepConfig &config,
                       Exec exec = Exec::serial);

/// Tasks (cell, trial) run in parallel; each uses its own derived seed, so
/// the report is identical for any thread count.
SweepReport run_sweep(const SweepConfig &config, Exec exec = Exec::parallel);

SweepConfig sweep_config_from_json(const nlohmann::json &doc);
nlohmann::json sweep_config_json(const SweepConfig &config);
nlohmann::json sweep_report_json(const SweepReport &report);

/// Columns: kind,cell,row,col,row_value,col_value,metric,mean,std,trials
void write_sweep_csv(const SweepReport &report, std::ostream &out);

/// One line per (cell, trial): cell,row,col,trial,<metric>...
void write_sweep_samples_csv(const SweepReport &report, std::ostream &out);

} // namespace pcsim

#endif // PCSIM_SWEEP_HPP
