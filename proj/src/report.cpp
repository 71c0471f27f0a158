#include "pcsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace pcsim {

std::string format_sig9(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

nlohmann::json metric_report_json(const MetricReport &report, bool per_point) {
  nlohmann::json j;
  j["value"] = report.value;
  if (report.swapped) {
    j["swapped"] = true;
  }
  if (per_point) {
    j["per_point_src"] = report.per_point_src;
    j["per_point_tgt"] = report.per_point_tgt;
    j["frequencies_src_to_tgt"] = report.src_to_tgt.counts;
    j["frequencies_tgt_to_src"] = report.tgt_to_src.counts;
  }
  return j;
}

nlohmann::json degradation_spec_json(const DegradationSpec &spec) {
  return {
      {"seed", spec.seed},
      {"noise_sigma", spec.noise_sigma},
      {"imbalance_n", spec.imbalance_n},
      {"partial_keep_fraction", spec.partial_keep_fraction},
      {"outlier_fraction", spec.outlier_fraction},
      {"outlier_radius", spec.outlier_radius},
      {"curvature_ratio", spec.curvature_ratio},
      {"target_size", spec.target_size},
  };
}

DegradationSpec degradation_spec_from_json(const nlohmann::json &doc) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::ParseError, "degradation spec must be a JSON object");
  }
  DegradationSpec spec;
  const std::vector<std::pair<const char *, std::function<void(const nlohmann::json &)>>>
      fields = {
          {"seed", [&](const auto &v) { spec.seed = v.template get<std::uint64_t>(); }},
          {"noise_sigma", [&](const auto &v) { spec.noise_sigma = v.template get<double>(); }},
          {"imbalance_n", [&](const auto &v) { spec.imbalance_n = v.template get<std::size_t>(); }},
          {"partial_keep_fraction",
           [&](const auto &v) { spec.partial_keep_fraction = v.template get<double>(); }},
          {"outlier_fraction",
           [&](const auto &v) { spec.outlier_fraction = v.template get<double>(); }},
          {"outlier_radius", [&](const auto &v) { spec.outlier_radius = v.template get<double>(); }},
          {"curvature_ratio",
           [&](const auto &v) { spec.curvature_ratio = v.template get<double>(); }},
          {"target_size", [&](const auto &v) { spec.target_size = v.template get<std::size_t>(); }},
      };
  for (const auto &[key, value] : doc.items()) {
    const auto it = std::find_if(fields.begin(), fields.end(),
                                 [&](const auto &f) { return key == f.first; });
    if (it == fields.end()) {
      throw Error(ErrorCode::ParseError, "unknown degradation spec field '" + key + "'");
    }
    try {
      it->second(value);
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::ParseError, "field '" + key + "': " + e.what());
    }
  }
  spec.validate();
  return spec;
}

AccumulationCurve accumulation_curve(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::InvalidCount, "accumulation needs at least 2 samples");
  }
  AccumulationCurve c;
  c.sorted.assign(values.begin(), values.end());
  for (double v : c.sorted) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidParameter,
                  "accumulation values must be finite and non-negative");
    }
  }
  std::sort(c.sorted.begin(), c.sorted.end(), std::greater<>());
  double total = 0.0;
  for (double v : c.sorted) {
    total += v;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "accumulation total is zero");
  }
  c.cumulative.resize(c.sorted.size());
  double run = 0.0;
  for (std::size_t i = 0; i < c.sorted.size(); ++i) {
    run += c.sorted[i];
    c.cumulative[i] = std::min(run / total, 1.0);
  }
  c.cumulative.back() = 1.0;
  return c;
}

double AccumulationCurve::top_fraction(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "fraction must lie in [0, 1]");
  }
  const auto n = static_cast<double>(sorted.size());
  const double pos = q * n;
  const auto k = static_cast<std::size_t>(std::floor(pos));
  if (k >= sorted.size()) {
    return 1.0;
  }
  const double before = k > 0 ? cumulative[k - 1] : 0.0;
  const double step = cumulative[k] - before;
  return before + (pos - static_cast<double>(k)) * step;
}

void write_accumulation_csv(const AccumulationCurve &curve, std::ostream &out) {
  out << "rank,percentile,value,cumulative_fraction\n";
  const auto n = static_cast<double>(curve.sorted.size());
  for (std::size_t i = 0; i < curve.sorted.size(); ++i) {
    out << (i + 1) << ',' << format_sig9(static_cast<double>(i + 1) / n) << ','
        << format_sig9(curve.sorted[i]) << ',' << format_sig9(curve.cumulative[i])
        << '\n';
  }
}

nlohmann::json accumulation_json(const AccumulationCurve &curve,
                                 const std::string &column) {
  return {
      {"column", column},
      {"samples", curve.sorted.size()},
      {"top_25_fraction", curve.top_fraction(0.25)},
      {"top_50_fraction", curve.top_fraction(0.5)},
      {"sorted_values", curve.sorted},
      {"cumulative_fraction", curve.cumulative},
  };
}

} // namespace pcsim
