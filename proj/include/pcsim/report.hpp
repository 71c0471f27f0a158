#ifndef PCSIM_REPORT_HPP
#define PCSIM_REPORT_HPP

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "pcsim/degrade.hpp"
#include "pcsim/metrics.hpp"

namespace pcsim {

/// Text form used by every command: 9 significant digits.
std::string format_sig9(double value);

nlohmann::json metric_report_json(const MetricReport &report, bool per_point);

nlohmann::json degradation_spec_json(const DegradationSpec &spec);

/// Missing fields take their defaults; unknown fields are rejected.
DegradationSpec degradation_spec_from_json(const nlohmann::json &doc);

/// Per-sample values ranked from largest to smallest with the cumulative
/// share of the total at each rank.
struct AccumulationCurve {
  std::vector<double> sorted;
  std::vector<double> cumulative; ///< non-decreasing, ends at 1

  /// Share of the total carried by the top q fraction of samples, linearly
  /// interpolated between ranks.
  double top_fraction(double q) const;
};

/// Needs >= 2 finite, non-negative values with a positive sum.
AccumulationCurve accumulation_curve(std::span<const double> values);

/// Columns: rank,percentile,value,cumulative_fraction
void write_accumulation_csv(const AccumulationCurve &curve, std::ostream &out);

nlohmann::json accumulation_json(const AccumulationCurve &curve,
                                 const std::string &column);

} // namespace pcsim

#endif // PCSIM_REPORT_HPP
