#include "pcsim/timing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pcsim/degrade.hpp"
#include "pcsim/report.hpp"
#include "pcsim/rng.hpp"
#include "pcsim/sampling.hpp"
#include "pcsim/transport.hpp"

namespace pcsim {

namespace {

const std::vector<std::string> timed_metrics{"cd_t", "dcd", "emd"};

template <class F> double seconds(F &&f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

std::vector<TimingLevel> default_timing_levels() {
  return {{"none", 2.0, 1.0}, {"mid", 0.5, 0.5}, {"high", 0.125, 0.5}};
}

void TimingConfig::validate() const {
  if (sizes.empty() || trials < 1 || levels.empty()) {
    throw Error(ErrorCode::InvalidParameter, "timing: sizes, trials and levels required");
  }
  for (auto n : sizes) {
    if (n < 64) {
      throw Error(ErrorCode::InvalidParameter, "timing: sizes must be >= 64");
    }
  }
  for (const auto &l : levels) {
    if (!(l.imbalance_factor > 0.0) || !(l.keep_fraction > 0.0 && l.keep_fraction <= 1.0)) {
      throw Error(ErrorCode::InvalidParameter, "timing: bad level '" + l.name + "'");
    }
  }
  dcd.validate();
}

double TimingReport::median(const std::string &metric, std::size_t size,
                            const std::string &level) const {
  for (const auto &r : rows) {
    if (r.metric == metric && r.size == size && r.level == level) {
      return r.median_seconds;
    }
  }
  throw Error(ErrorCode::InvalidParameter, "timing: no row for " + metric);
}

bool TimingReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const TimingCheck &c) { return c.passed; });
}

TimingReport run_timing(const TimingConfig &config) {
  config.validate();
  TimingReport report;
  for (std::size_t si = 0; si < config.sizes.size(); ++si) {
    const std::size_t n = config.sizes[si];
    for (std::size_t li = 0; li < config.levels.size(); ++li) {
      const auto &level = config.levels[li];
      std::vector<std::vector<double>> times(timed_metrics.size());
      for (std::size_t t = 0; t < config.trials; ++t) {
        const auto shape_seed = derive_seed({config.master_seed, n, t});
        const auto dense = synth_shapes(ShapeKind::sphere, 8 * n, shape_seed);
        const auto reference = fps(dense.cloud, n, 0, Exec::serial);
        DegradationSpec spec;
        spec.seed = derive_seed({shape_seed, li});
        spec.target_size = n;
        spec.imbalance_n = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::lround(level.imbalance_factor * n)));
        spec.imbalance_n = std::min(spec.imbalance_n, dense.cloud.size());
        spec.partial_keep_fraction = level.keep_fraction;
        const auto degraded = mix_noise_imbalance(dense.cloud, spec);

        double sink = 0.0;
        times[0].push_back(seconds([&] {
          sink += chamfer(degraded, reference, ChamferVariant::T, Exec::serial).value;
        }));
        times[1].push_back(seconds(
            [&] { sink += dcd(degraded, reference, config.dcd, Exec::serial).value; }));
        times[2].push_back(seconds([&] {
          sink += emd_approx(degraded, reference, config.emd_eps, config.emd_iters,
                             Exec::serial)
                      .total_cost;
        }));
        if (!std::isfinite(sink)) {
          throw Error(ErrorCode::NonFinite, "timing: non-finite metric value");
        }
      }
      for (std::size_t m = 0; m < timed_metrics.size(); ++m) {
        report.rows.push_back(
            {timed_metrics[m], n, level.name, median_of(times[m]), config.trials});
      }
    }

    const auto &first = config.levels.front().name;
    const double cd = report.median("cd_t", n, first);
    const double dc = report.median("dcd", n, first);
    const double em = report.median("emd", n, first);
    report.checks.push_back({"dcd_over_cd", n, dc / cd, dc <= 5.0 * cd});
    report.checks.push_back({"emd_over_dcd", n, em / dc, em >= 10.0 * dc});
    std::size_t inversions = 0;
    for (std::size_t li = 1; li < config.levels.size(); ++li) {
      if (report.median("emd", n, config.levels[li].name) <
          report.median("emd", n, config.levels[li - 1].name)) {
        ++inversions;
      }
    }
    report.checks.push_back({"emd_nondecreasing_inversions", n,
                             static_cast<double>(inversions), inversions == 0});
  }
  return report;
}

void write_timing_csv(const TimingReport &report, std::ostream &out) {
  out << "metric,size,level,median_seconds,trials\n";
  for (const auto &r : report.rows) {
    out << r.metric << ',' << r.size << ',' << r.level << ','
        << format_sig9(r.median_seconds) << ',' << r.trials << '\n';
  }
}

} // namespace pcsim
