#include "pcsim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "pcsim/report.hpp"
#include "pcsim/rng.hpp"
#include "pcsim/sampling.hpp"
#include "pcsim/transport.hpp"

namespace pcsim {

namespace {

const std::vector<std::string> known_metrics{"cd_t", "cd_p", "hd", "dcd", "emd"};

std::string_view kind_name(SweepKind kind) {
  return kind == SweepKind::noise_imbalance ? "noise_imbalance" : "curvature_mix";
}

struct TrialData {
  SyntheticShape dense;
  PointCloud reference;
  double spacing = 0.0;
};

TrialData make_trial(const SweepConfig &config, std::size_t trial) {
  const auto kind = config.shapes[trial % config.shapes.size()];
  auto dense = synth_shapes(kind, config.dense_size,
                            derive_seed({config.master_seed, 0x7368617065, trial}));
  PointCloud reference = fps(dense.cloud, config.target_size, 0, Exec::serial);
  const double spacing = mean_nn_spacing(reference, Exec::serial);
  return {std::move(dense), std::move(reference), spacing};
}

SweepPair make_pair(const SweepConfig &config, const TrialData &data,
                    std::size_t row, std::size_t col, std::size_t trial) {
  const std::size_t cell = row * config.cols() + col;
  const std::uint64_t seed = derive_seed({config.master_seed, cell, trial});
  if (config.kind == SweepKind::noise_imbalance) {
    DegradationSpec spec;
    spec.seed = seed;
    spec.noise_sigma = config.sigma[row];
    spec.imbalance_n = config.imbalance_n[col];
    spec.partial_keep_fraction = config.partial_keep_fraction;
    spec.target_size = config.target_size;
    return {data.reference, mix_noise_imbalance(data.dense.cloud, spec, data.spacing)};
  }

  // Curvature sweep: the reference itself carries the density bias and the
  // output is a noisy, basically uniform sample.
  PointCloud reference = curvature_mix_sample(data.dense.cloud, data.dense.curvature,
                                              config.r_c[col], config.target_size, seed);
  Rng rng(derive_seed({seed, 0x6f7574}));
  std::uniform_int_distribution<std::size_t> start(0, data.dense.cloud.size() - 1);
  const auto uniform = fps(data.dense.cloud, config.target_size, start(rng), Exec::serial);
  std::normal_distribution<double> gauss(0.0, config.output_noise_sigma * data.spacing);
  std::vector<Point3> pts(uniform.begin(), uniform.end());
  for (auto &p : pts) {
    p += Point3{gauss(rng), gauss(rng), gauss(rng)};
  }
  return {std::move(reference), PointCloud(std::move(pts))};
}

double sample_std(const std::vector<double> &v, double mean) {
  if (v.size() < 2) {
    return 0.0;
  }
  double acc = 0.0;
  for (double x : v) {
    acc += (x - mean) * (x - mean);
  }
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

} // namespace

void SweepConfig::validate() const {
  auto fail = [](const std::string &what) {
    throw Error(ErrorCode::InvalidParameter, "sweep config: " + what);
  };
  if (trials < 1) {
    fail("trials must be >= 1");
  }
  if (shapes.empty()) {
    fail("at least one shape kind is required");
  }
  if (target_size < 1 || dense_size < target_size || dense_size < 64) {
    fail("need 64 <= dense_size and target_size <= dense_size");
  }
  if (metrics.empty()) {
    fail("no metrics requested");
  }
  for (const auto &m : metrics) {
    if (std::find(known_metrics.begin(), known_metrics.end(), m) == known_metrics.end()) {
      fail("unknown metric '" + m + "'");
    }
  }
  if (kind == SweepKind::noise_imbalance) {
    if (sigma.empty() || imbalance_n.empty()) {
      fail("sigma and imbalance_n axes must be non-empty");
    }
    for (double s : sigma) {
      if (!(s >= 0.0)) {
        fail("sigma values must be >= 0");
      }
    }
    for (auto n : imbalance_n) {
      if (n < 1) {
        fail("imbalance_n values must be >= 1");
      }
    }
  } else {
    if (r_c.empty()) {
      fail("r_c axis must be non-empty");
    }
    for (double r : r_c) {
      if (!(r >= 0.0 && r <= 1.0)) {
        fail("r_c values must lie in [0, 1]");
      }
    }
  }
  dcd.validate();
  if (!(emd_eps > 0.0) || emd_iters < 1) {
    fail("emd_eps must be > 0 and emd_iters >= 1");
  }
}

std::size_t SweepConfig::rows() const {
  return kind == SweepKind::noise_imbalance ? sigma.size() : 1;
}

std::size_t SweepConfig::cols() const {
  return kind == SweepKind::noise_imbalance ? imbalance_n.size() : r_c.size();
}

std::size_t SweepReport::metric_index(const std::string &name) const {
  const auto it = std::find(config.metrics.begin(), config.metrics.end(), name);
  if (it == config.metrics.end()) {
    throw Error(ErrorCode::InvalidParameter, "metric '" + name + "' not in report");
  }
  return static_cast<std::size_t>(it - config.metrics.begin());
}

const SweepCell &SweepReport::cell(std::size_t row, std::size_t col) const {
  return cells.at(row * col_values.size() + col);
}

double SweepReport::mean(std::size_t row, std::size_t col,
                         const std::string &metric) const {
  return cell(row, col).mean[metric_index(metric)];
}

SweepPair sweep_pair(const SweepConfig &config, std::size_t row, std::size_t col,
                     std::size_t trial) {
  config.validate();
  return make_pair(config, make_trial(config, trial), row, col, trial);
}

double evaluate_metric(const std::string &name, const PointCloud &degraded,
                       const PointCloud &reference, const SweepConfig &config,
                       Exec exec) {
  if (name == "cd_t") {
    return chamfer(degraded, reference, ChamferVariant::T, exec).value;
  }
  if (name == "cd_p") {
    return chamfer(degraded, reference, ChamferVariant::P, exec).value;
  }
  if (name == "hd") {
    return hausdorff(degraded, reference, exec);
  }
  if (name == "dcd") {
    if (degraded.size() == reference.size()) {
      return dcd(degraded, reference, config.dcd, exec).value;
    }
    return dcd_unequal(degraded, reference, config.dcd, UnequalVariant::E, exec).value;
  }
  if (name == "emd") {
    const auto r = emd_approx(degraded, reference, config.emd_eps, config.emd_iters, exec);
    return emd_value(r, EmdNormalize::mean);
  }
  throw Error(ErrorCode::InvalidParameter, "unknown metric '" + name + "'");
}

SweepReport run_sweep(const SweepConfig &config, Exec exec) {
  config.validate();
  const std::size_t rows = config.rows();
  const std::size_t cols = config.cols();
  const std::size_t trials = config.trials;
  const std::size_t n_metrics = config.metrics.size();

  std::vector<std::optional<TrialData>> trial_data(trials);
  const auto n_trials = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (std::ptrdiff_t t = 0; t < n_trials; ++t) {
    trial_data[static_cast<std::size_t>(t)] = make_trial(config, static_cast<std::size_t>(t));
  }

  const std::size_t n_tasks = rows * cols * trials;
  std::vector<double> values(n_tasks * n_metrics);
  const auto tasks = static_cast<std::ptrdiff_t>(n_tasks);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (std::ptrdiff_t task = 0; task < tasks; ++task) {
    const auto u = static_cast<std::size_t>(task);
    const std::size_t cell = u / trials;
    const std::size_t trial = u % trials;
    const auto pair = make_pair(config, *trial_data[trial], cell / cols, cell % cols, trial);
    for (std::size_t m = 0; m < n_metrics; ++m) {
      values[u * n_metrics + m] =
          evaluate_metric(config.metrics[m], pair.degraded, pair.reference, config);
    }
  }

  SweepReport report;
  report.config = config;
  if (config.kind == SweepKind::noise_imbalance) {
    report.row_axis = "sigma";
    report.col_axis = "imbalance_n";
    report.row_values = config.sigma;
    for (auto n : config.imbalance_n) {
      report.col_values.push_back(static_cast<double>(n));
    }
  } else {
    report.row_axis = "none";
    report.col_axis = "r_c";
    report.row_values = {0.0};
    report.col_values = config.r_c;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      SweepCell cell;
      cell.row = r;
      cell.col = c;
      cell.row_value = report.row_values[r];
      cell.col_value = report.col_values[c];
      const std::size_t base = (r * cols + c) * trials;
      for (std::size_t m = 0; m < n_metrics; ++m) {
        std::vector<double> samples(trials);
        double sum = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
          samples[t] = values[(base + t) * n_metrics + m];
          sum += samples[t];
        }
        const double mean = sum / static_cast<double>(trials);
        cell.mean.push_back(mean);
        cell.stddev.push_back(sample_std(samples, mean));
        cell.samples.push_back(std::move(samples));
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

SweepConfig sweep_config_from_json(const nlohmann::json &doc) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::ParseError, "sweep config must be a JSON object");
  }
  SweepConfig c;
  try {
    for (const auto &[key, v] : doc.items()) {
      if (key == "kind") {
        const auto s = v.get<std::string>();
        if (s == "noise_imbalance") {
          c.kind = SweepKind::noise_imbalance;
        } else if (s == "curvature_mix") {
          c.kind = SweepKind::curvature_mix;
        } else {
          throw Error(ErrorCode::ParseError, "unknown sweep kind '" + s + "'");
        }
      } else if (key == "master_seed") {
        c.master_seed = v.get<std::uint64_t>();
      } else if (key == "trials") {
        c.trials = v.get<std::size_t>();
      } else if (key == "shapes") {
        c.shapes.clear();
        for (const auto &s : v) {
          c.shapes.push_back(shape_from_string(s.get<std::string>()));
        }
      } else if (key == "dense_size") {
        c.dense_size = v.get<std::size_t>();
      } else if (key == "target_size") {
        c.target_size = v.get<std::size_t>();
      } else if (key == "sigma") {
        c.sigma = v.get<std::vector<double>>();
      } else if (key == "imbalance_n") {
        c.imbalance_n = v.get<std::vector<std::size_t>>();
      } else if (key == "partial_keep_fraction") {
        c.partial_keep_fraction = v.get<double>();
      } else if (key == "r_c") {
        c.r_c = v.get<std::vector<double>>();
      } else if (key == "output_noise_sigma") {
        c.output_noise_sigma = v.get<double>();
      } else if (key == "alpha") {
        c.dcd.alpha = v.get<double>();
      } else if (key == "lambda") {
        c.dcd.lambda = v.get<double>();
      } else if (key == "exponent_mode") {
        const auto s = v.get<std::string>();
        if (s == "squared") {
          c.dcd.mode = ExponentMode::squared;
        } else if (s == "euclidean") {
          c.dcd.mode = ExponentMode::euclidean;
        } else {
          throw Error(ErrorCode::ParseError, "unknown exponent_mode '" + s + "'");
        }
      } else if (key == "emd_eps") {
        c.emd_eps = v.get<double>();
      } else if (key == "emd_iters") {
        c.emd_iters = v.get<std::size_t>();
      } else if (key == "metrics") {
        c.metrics = v.get<std::vector<std::string>>();
      } else {
        throw Error(ErrorCode::ParseError, "unknown sweep config field '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::ParseError, std::string("sweep config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json sweep_config_json(const SweepConfig &c) {
  std::vector<std::string> shapes;
  for (auto s : c.shapes) {
    shapes.emplace_back(to_string(s));
  }
  return {
      {"kind", kind_name(c.kind)},
      {"master_seed", c.master_seed},
      {"trials", c.trials},
      {"shapes", shapes},
      {"dense_size", c.dense_size},
      {"target_size", c.target_size},
      {"sigma", c.sigma},
      {"imbalance_n", c.imbalance_n},
      {"partial_keep_fraction", c.partial_keep_fraction},
      {"r_c", c.r_c},
      {"output_noise_sigma", c.output_noise_sigma},
      {"alpha", c.dcd.alpha},
      {"lambda", c.dcd.lambda},
      {"exponent_mode", to_string(c.dcd.mode)},
      {"emd_eps", c.emd_eps},
      {"emd_iters", c.emd_iters},
      {"metrics", c.metrics},
  };
}

nlohmann::json sweep_report_json(const SweepReport &report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto &cell : report.cells) {
    nlohmann::json metrics = nlohmann::json::object();
    for (std::size_t m = 0; m < report.config.metrics.size(); ++m) {
      metrics[report.config.metrics[m]] = {{"mean", cell.mean[m]},
                                           {"std", cell.stddev[m]}};
    }
    cells.push_back({{"row", cell.row},
                     {"col", cell.col},
                     {"row_value", cell.row_value},
                     {"col_value", cell.col_value},
                     {"metrics", metrics}});
  }
  return {
      {"kind", kind_name(report.config.kind)},
      {"master_seed", report.config.master_seed},
      {"trials", report.config.trials},
      {"row_axis", report.row_axis},
      {"col_axis", report.col_axis},
      {"row_values", report.row_values},
      {"col_values", report.col_values},
      {"metrics", report.config.metrics},
      {"config", sweep_config_json(report.config)},
      {"cells", cells},
  };
}

void write_sweep_csv(const SweepReport &report, std::ostream &out) {
  out << "kind,cell,row,col,row_value,col_value,metric,mean,std,trials\n";
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const auto &cell = report.cells[i];
    for (std::size_t m = 0; m < report.config.metrics.size(); ++m) {
      out << kind_name(report.config.kind) << ',' << i << ',' << cell.row << ','
          << cell.col << ',' << format_sig9(cell.row_value) << ','
          << format_sig9(cell.col_value) << ',' << report.config.metrics[m] << ','
          << format_sig9(cell.mean[m]) << ',' << format_sig9(cell.stddev[m]) << ','
          << report.config.trials << '\n';
    }
  }
}

void write_sweep_samples_csv(const SweepReport &report, std::ostream &out) {
  out << "cell,row,col,trial";
  for (const auto &m : report.config.metrics) {
    out << ',' << m;
  }
  out << '\n';
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const auto &cell = report.cells[i];
    for (std::size_t t = 0; t < report.config.trials; ++t) {
      out << i << ',' << cell.row << ',' << cell.col << ',' << t;
      for (std::size_t m = 0; m < report.config.metrics.size(); ++m) {
        out << ',' << format_sig9(cell.samples[m][t]);
      }
      out << '\n';
    }
  }
}

} // namespace pcsim
