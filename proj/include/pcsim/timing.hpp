#ifndef PCSIM_TIMING_HPP
#define PCSIM_TIMING_HPP

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "pcsim/metrics.hpp"

namespace pcsim {

/// Degradation applied to the timed pair. imbalance_factor scales the size
/// of the noisy complete component relative to n.
struct TimingLevel {
  std::string name;
  double imbalance_factor = 2.0;
  double keep_fraction = 1.0;
};

std::vector<TimingLevel> default_timing_levels();

struct TimingConfig {
  std::vector<std::size_t> sizes{2048};
  std::size_t trials = 20;
  std::uint64_t master_seed = 1;
  std::vector<TimingLevel> levels = default_timing_levels();
  DcdParams dcd{};
  double emd_eps = 0.004;
  std::size_t emd_iters = 3000;

  void validate() const;
};

struct TimingRow {
  std::string metric; ///< cd_t, dcd or emd
  std::size_t size = 0;
  std::string level;
  double median_seconds = 0.0;
  std::size_t trials = 0;
};

struct TimingCheck {
  std::string name;
  std::size_t size = 0;
  double observed = 0.0;
  bool passed = false;
};

struct TimingReport {
  std::vector<TimingRow> rows;
  std::vector<TimingCheck> checks;

  double median(const std::string &metric, std::size_t size,
                const std::string &level) const;
  bool all_passed() const;
};

/// Times each metric serially on seeded pairs. Checks per size:
/// dcd/cd_t <= 5 and emd/dcd >= 10 at the first level, and the EMD median
/// non-decreasing along the level list.
TimingReport run_timing(const TimingConfig &config);

/// Columns: metric,size,level,median_seconds,trials
void write_timing_csv(const TimingReport &report, std::ostream &out);

} // namespace pcsim

#endif // PCSIM_TIMING_HPP
