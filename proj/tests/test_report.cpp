#include <sstream>

#include "helpers.hpp"
#include "pcsim/report.hpp"
#include "pcsim/sweep.hpp"
#include "pcsim/timing.hpp"
#include "pcsim/transport.hpp"

using namespace pcsim;
using nlohmann::json;

TEST_CASE("format_sig9") {
  CHECK(format_sig9(0.6321205588285577) == "0.632120559");
  CHECK(format_sig9(2.0) == "2");
  CHECK(format_sig9(1.0 / 3.0e9) == "3.33333333e-10");
}

TEST_CASE("accumulation curves") {
  const std::vector<double> equal(8, 2.5);
  const auto c = accumulation_curve(equal);
  CHECK(c.top_fraction(0.5) == 0.5);
  CHECK(c.cumulative.back() == 1.0);

  const std::vector<double> two{1, 3};
  const auto t = accumulation_curve(two);
  CHECK(t.sorted == std::vector<double>{3, 1});
  CHECK(t.top_fraction(0.5) == 0.75);
  CHECK(t.top_fraction(1.0) == 1.0);
  CHECK(t.top_fraction(0.0) == 0.0);

  std::mt19937_64 rng(61);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(500);
  for (auto &x : v) {
    x = e(rng);
  }
  const auto r = accumulation_curve(v);
  CHECK(std::is_sorted(r.cumulative.begin(), r.cumulative.end()));
  CHECK(r.cumulative.back() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.top_fraction(0.5) > 0.5);

  std::ostringstream csv;
  write_accumulation_csv(t, csv);
  CHECK(csv.str() == "rank,percentile,value,cumulative_fraction\n1,0.5,3,0.75\n2,1,1,1\n");
  const auto j = accumulation_json(t, "cd_t");
  CHECK(j.at("top_50_fraction").get<double>() == 0.75);

  const std::vector<double> one{1.0};
  CHECK(error_of([&] { accumulation_curve(one); }) == ErrorCode::InvalidCount);
  const std::vector<double> neg{1.0, -1.0};
  CHECK(error_of([&] { accumulation_curve(neg); }) == ErrorCode::InvalidParameter);
  const std::vector<double> zero{0.0, 0.0};
  CHECK(error_of([&] { accumulation_curve(zero); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("degradation spec JSON") {
  DegradationSpec s;
  s.seed = 77;
  s.noise_sigma = 1.5;
  s.imbalance_n = 300;
  const auto back = degradation_spec_from_json(degradation_spec_json(s));
  CHECK(back.seed == 77);
  CHECK(back.noise_sigma == 1.5);
  CHECK(back.imbalance_n == 300);
  CHECK(degradation_spec_from_json(json::object()).target_size == 2048);
  CHECK(error_of([] { degradation_spec_from_json(json{{"noise", 1}}); }) == ErrorCode::ParseError);
  CHECK(error_of([] { degradation_spec_from_json(json{{"seed", "x"}}); }) == ErrorCode::ParseError);
  CHECK(error_of([] { degradation_spec_from_json(json{{"noise_sigma", -1.0}}); }) ==
        ErrorCode::InvalidParameter);
}

namespace {

SweepConfig small_sweep() {
  SweepConfig c;
  c.trials = 2;
  c.dense_size = 2048;
  c.target_size = 256;
  c.sigma = {0.0, 2.0};
  c.imbalance_n = {512, 64};
  c.metrics = {"cd_t", "cd_p", "hd", "dcd", "emd"};
  return c;
}

} // namespace

TEST_CASE("sweep: cells match direct evaluation") {
  auto c = small_sweep();
  c.sigma = {1.0};
  c.imbalance_n = {128};
  c.trials = 1;
  const auto report = run_sweep(c);
  REQUIRE(report.cells.size() == 1);
  const auto pair = sweep_pair(c, 0, 0, 0);
  CHECK(pair.degraded.size() == 256);
  CHECK(report.mean(0, 0, "cd_t") == chamfer(pair.degraded, pair.reference, ChamferVariant::T).value);
  CHECK(report.mean(0, 0, "dcd") == dcd(pair.degraded, pair.reference, c.dcd).value);
  CHECK(report.mean(0, 0, "emd") ==
        emd_value(emd_approx(pair.degraded, pair.reference), EmdNormalize::mean));
  CHECK(report.cell(0, 0).stddev[0] == 0.0);
}

TEST_CASE("sweep: deterministic and independent of threading") {
  const auto c = small_sweep();
  const auto a = run_sweep(c, Exec::parallel);
  const auto b = run_sweep(c, Exec::serial);
  std::ostringstream sa, sb, sc;
  write_sweep_csv(a, sa);
  write_sweep_csv(b, sb);
  write_sweep_samples_csv(a, sc);
  CHECK(sa.str() == sb.str());
  CHECK(a.cells.size() == 4);
  CHECK(sa.str().rfind("kind,cell,row,col,row_value,col_value,metric,mean,std,trials\n", 0) == 0);
  CHECK(sc.str().rfind("cell,row,col,trial,cd_t,cd_p,hd,dcd,emd\n", 0) == 0);
  for (const auto &cell : a.cells) {
    for (const auto &s : cell.samples) {
      CHECK(s.size() == 2);
    }
  }
  auto c2 = c;
  c2.master_seed = 99;
  std::ostringstream s2;
  write_sweep_csv(run_sweep(c2), s2);
  CHECK(s2.str() != sa.str());
}

TEST_CASE("sweep: curvature kind") {
  SweepConfig c;
  c.kind = SweepKind::curvature_mix;
  c.trials = 2;
  c.dense_size = 2048;
  c.target_size = 256;
  c.shapes = {ShapeKind::box};
  c.r_c = {0.0, 0.75};
  c.metrics = {"cd_t", "dcd"};
  const auto r = run_sweep(c);
  CHECK(r.cells.size() == 2);
  CHECK(r.col_axis == "r_c");
}

TEST_CASE("sweep config JSON") {
  const auto c = small_sweep();
  const auto back = sweep_config_from_json(sweep_config_json(c));
  CHECK(sweep_config_json(back) == sweep_config_json(c));
  CHECK(error_of([] { sweep_config_from_json(json{{"trials", 0}}); }) == ErrorCode::InvalidParameter);
  CHECK(error_of([] { sweep_config_from_json(json{{"bogus", 1}}); }) == ErrorCode::ParseError);
  CHECK(error_of([] { sweep_config_from_json(json{{"metrics", {"cd_x"}}}); }) ==
        ErrorCode::InvalidParameter);
  CHECK(error_of([] { sweep_config_from_json(json{{"kind", "other"}}); }) == ErrorCode::ParseError);
  CHECK(error_of([] { sweep_config_from_json(json::array()); }) == ErrorCode::ParseError);
  const auto j = sweep_report_json(run_sweep(small_sweep()));
  CHECK(j["cells"].size() == 4);
  CHECK(j["cells"][0]["metrics"]["dcd"].contains("std"));
}

TEST_CASE("timing report") {
  TimingConfig c;
  c.sizes = {128};
  c.trials = 3;
  const auto r = run_timing(c);
  CHECK(r.rows.size() == 9);
  CHECK(r.checks.size() == 3);
  std::ostringstream csv;
  write_timing_csv(r, csv);
  CHECK(csv.str().rfind("metric,size,level,median_seconds,trials\n", 0) == 0);
  c.sizes = {32};
  CHECK(error_of([&] { run_timing(c); }) == ErrorCode::InvalidParameter);
}
