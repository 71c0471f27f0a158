// pcsim: command line front end for the point-set metrics library.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pcsim/cloud_io.hpp"
#include "pcsim/dsample.hpp"
#include "pcsim/grad.hpp"
#include "pcsim/metrics.hpp"
#include "pcsim/parallel.hpp"
#include "pcsim/report.hpp"
#include "pcsim/sweep.hpp"
#include "pcsim/timing.hpp"
#include "pcsim/transport.hpp"

using namespace pcsim;
using nlohmann::json;

namespace {

constexpr int exit_usage = 2;
constexpr int exit_precondition = 3;
constexpr int exit_check_failed = 4;

struct Global {
  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool json = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int report_error(const std::exception &e, int code) {
  std::cerr << "pcsim: " << e.what() << '\n';
  return code;
}

// Writes to `path`, or stdout when the path is empty or "-".
template <class F> void with_output(const std::string &path, F &&write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) {
    throw UsageError("cannot open '" + path + "' for writing");
  }
  write(out);
}

json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

// ---- dist

struct DistOptions {
  std::string a, b;
  bool cd = false, cd_p = false, hd = false, use_dcd = false, emd = false;
  bool emd_exact = false;
  bool per_point = false;
  double alpha = 1000.0;
  double lambda = 1.0;
  std::string mode = "squared";
  std::string variant;
  double emd_eps = 0.004;
  std::size_t emd_iters = 3000;
  std::string emd_norm = "mean";
};

int run_dist(const DistOptions &o, const Global &g) {
  std::optional<PointCloud> ca, cb;
  try {
    ca = read_cloud(o.a);
    cb = read_cloud(o.b);
  } catch (const Error &e) {
    return report_error(e, exit_usage);
  }
  const PointCloud &a = *ca;
  const PointCloud &b = *cb;

  DcdParams params;
  params.alpha = o.alpha;
  params.lambda = o.lambda;
  params.mode = o.mode == "euclidean" ? ExponentMode::euclidean : ExponentMode::squared;

  bool cd = o.cd, cd_p = o.cd_p, hd = o.hd, use_dcd = o.use_dcd, emd = o.emd;
  if (!(cd || cd_p || hd || use_dcd || emd)) {
    cd = use_dcd = true;
  }

  std::vector<std::pair<std::string, double>> values;
  json doc = {{"a", o.a}, {"b", o.b}, {"size_a", a.size()}, {"size_b", b.size()}};
  json metrics = json::object();
  try {
    params.validate();
    if (cd) {
      const auto r = chamfer(a, b, ChamferVariant::T);
      values.emplace_back("cd_t", r.value);
      metrics["cd_t"] = metric_report_json(r, o.per_point);
    }
    if (cd_p) {
      const auto r = chamfer(a, b, ChamferVariant::P);
      values.emplace_back("cd_p", r.value);
      metrics["cd_p"] = metric_report_json(r, o.per_point);
    }
    if (hd) {
      const double v = hausdorff(a, b);
      values.emplace_back("hd", v);
      metrics["hd"] = {{"value", v}};
    }
    if (use_dcd) {
      MetricReport r;
      std::string name = "dcd";
      if (o.variant.empty()) {
        if (a.size() != b.size()) {
          throw Error(ErrorCode::CardinalityMismatch,
                      "dcd needs equal sizes (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + "); use --variant e");
        }
        r = dcd(a, b, params);
      } else {
        const auto v = o.variant == "naive" ? UnequalVariant::naive : UnequalVariant::E;
        name += o.variant == "naive" ? "_naive" : "_e";
        r = dcd_unequal(a, b, params, v);
      }
      values.emplace_back(name, r.value);
      metrics[name] = metric_report_json(r, o.per_point);
    }
    if (emd) {
      const auto r = o.emd_exact ? emd_exact(a, b) : emd_approx(a, b, o.emd_eps, o.emd_iters);
      const auto norm = o.emd_norm == "sum" ? EmdNormalize::sum : EmdNormalize::mean;
      const double v = emd_value(r, norm);
      values.emplace_back("emd", v);
      metrics["emd"] = {{"value", v},
                        {"normalize", o.emd_norm},
                        {"solver", o.emd_exact ? "exact" : "auction"},
                        {"iterations", r.iterations},
                        {"approx_error", r.approx_error},
                        {"converged", r.converged}};
    }
  } catch (const Error &e) {
    return report_error(e, exit_precondition);
  }

  if (g.json) {
    doc["metrics"] = metrics;
    std::cout << doc.dump(2) << '\n';
  } else {
    for (const auto &[name, v] : values) {
      std::cout << name << ' ' << format_sig9(v) << '\n';
    }
  }
  return 0;
}

// ---- sweep

struct SweepOptions {
  std::string config;
  std::string csv;
  std::string json_out;
  std::string samples;
};

int run_sweep_cmd(const SweepOptions &o, const Global &g) {
  SweepConfig config;
  try {
    config = sweep_config_from_json(read_json_file(o.config));
    if (g.seed) {
      config.master_seed = *g.seed;
    }
  } catch (const Error &e) {
    return report_error(e, e.code() == ErrorCode::ParseError ? exit_usage : exit_precondition);
  }
  const auto report = run_sweep(config);
  if (g.json && o.json_out.empty()) {
    std::cout << sweep_report_json(report).dump(2) << '\n';
  } else {
    with_output(o.csv, [&](std::ostream &out) { write_sweep_csv(report, out); });
  }
  if (!o.json_out.empty()) {
    with_output(o.json_out,
                [&](std::ostream &out) { out << sweep_report_json(report).dump(2) << '\n'; });
  }
  if (!o.samples.empty()) {
    with_output(o.samples, [&](std::ostream &out) { write_sweep_samples_csv(report, out); });
  }
  return 0;
}

// ---- accumulate

struct AccumulateOptions {
  std::string input;
  std::string column;
  std::string out;
};

int run_accumulate(const AccumulateOptions &o, const Global &g) {
  std::vector<double> values;
  try {
    std::ifstream in(o.input);
    if (!in) {
      throw Error(ErrorCode::ParseError, "cannot open '" + o.input + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
      throw Error(ErrorCode::ParseError, o.input + ": empty input");
    }
    const auto header = split_csv_line(line);
    const auto it = std::find(header.begin(), header.end(), o.column);
    if (it == header.end()) {
      throw Error(ErrorCode::ParseError, o.input + ": no column '" + o.column + "'");
    }
    const auto col = static_cast<std::size_t>(it - header.begin());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) {
        continue;
      }
      const auto cells = split_csv_line(line);
      if (cells.size() != header.size()) {
        throw Error(ErrorCode::ParseError,
                    o.input + ":" + std::to_string(line_no) + ": wrong field count");
      }
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cells[col], &used));
        if (used != cells[col].size()) {
          throw std::invalid_argument("trailing characters");
        }
      } catch (const std::logic_error &) {
        throw Error(ErrorCode::ParseError, o.input + ":" + std::to_string(line_no) +
                                               ": bad number '" + cells[col] + "'");
      }
    }
    if (values.empty()) {
      throw Error(ErrorCode::ParseError, o.input + ": empty input");
    }
  } catch (const Error &e) {
    return report_error(e, exit_usage);
  }

  AccumulationCurve curve;
  try {
    curve = accumulation_curve(values);
  } catch (const Error &e) {
    return report_error(e, exit_usage);
  }
  if (!o.out.empty()) {
    with_output(o.out, [&](std::ostream &out) { write_accumulation_csv(curve, out); });
  }
  if (g.json) {
    std::cout << accumulation_json(curve, o.column).dump(2) << '\n';
  } else if (o.out.empty()) {
    write_accumulation_csv(curve, std::cout);
    std::cerr << "top_25 " << format_sig9(curve.top_fraction(0.25)) << '\n'
              << "top_50 " << format_sig9(curve.top_fraction(0.5)) << '\n';
  } else {
    std::cout << "top_25 " << format_sig9(curve.top_fraction(0.25)) << '\n'
              << "top_50 " << format_sig9(curve.top_fraction(0.5)) << '\n';
  }
  return 0;
}

// ---- bench

struct BenchOptions {
  std::vector<std::size_t> sizes{2048};
  std::size_t trials = 20;
  std::string out;
  bool strict = false;
};

int run_bench(const BenchOptions &o, const Global &g) {
  TimingConfig config;
  config.sizes = o.sizes;
  config.trials = o.trials;
  if (g.seed) {
    config.master_seed = *g.seed;
  }
  TimingReport report;
  try {
    report = run_timing(config);
  } catch (const Error &e) {
    return report_error(e, exit_usage);
  }
  if (g.json) {
    json rows = json::array();
    for (const auto &r : report.rows) {
      rows.push_back({{"metric", r.metric},
                      {"size", r.size},
                      {"level", r.level},
                      {"median_seconds", r.median_seconds},
                      {"trials", r.trials}});
    }
    json checks = json::array();
    for (const auto &c : report.checks) {
      checks.push_back(
          {{"name", c.name}, {"size", c.size}, {"observed", c.observed}, {"passed", c.passed}});
    }
    std::cout << json{{"rows", rows}, {"checks", checks}}.dump(2) << '\n';
  } else {
    with_output(o.out, [&](std::ostream &out) { write_timing_csv(report, out); });
  }
  for (const auto &c : report.checks) {
    std::cerr << (c.passed ? "ok   " : "FAIL ") << c.name << " n=" << c.size << ' '
              << format_sig9(c.observed) << '\n';
  }
  return o.strict && !report.all_passed() ? exit_check_failed : 0;
}

// ---- downsample

struct DownsampleOptions {
  std::string coarse;
  std::string rec;
  std::string gt;
  std::string scorer = "oracle";
  std::string out;
  std::size_t m = 2048;
  double beta = 9.0;
  double gamma = 1.0;
  std::size_t upscale = 2;
};

int run_downsample(const DownsampleOptions &o, const Global &g) {
  std::optional<PointCloud> coarse, rec, gt;
  std::unique_ptr<Scorer> scorer;
  try {
    coarse = read_cloud(o.coarse);
    rec = read_cloud(o.rec);
    if (!o.gt.empty()) {
      gt = read_cloud(o.gt);
    }
    scorer = make_scorer(o.scorer);
  } catch (const Error &e) {
    return report_error(e, exit_usage);
  }

  std::optional<GuidedResult> guided;
  try {
    if (scorer->needs_ground_truth() && !gt) {
      throw Error(ErrorCode::InvalidParameter,
                  "scorer '" + scorer->name() + "' needs --gt");
    }
    SamplerParams params;
    params.beta = o.beta;
    params.gamma = o.gamma;
    params.upscale = o.upscale;
    const auto scored = score_cloud(*scorer, *coarse, gt ? &*gt : nullptr);
    guided = guided_downsample_detailed(scored, *rec, params, o.m, g.seed.value_or(0));
  } catch (const Error &e) {
    return report_error(e, exit_precondition);
  }
  const GuidedResult &result = *guided;

  std::size_t kept = 0;
  for (char k : result.kept) {
    kept += k != 0;
  }
  if (!o.out.empty()) {
    write_cloud(result.cloud, o.out);
  }
  json doc = {{"scorer", scorer->name()},
              {"upsampled", result.upsampled.size()},
              {"kept", kept},
              {"refilled", result.refilled},
              {"output", result.cloud.size()}};
  if (gt) {
    doc["cd_t_to_gt"] = chamfer(result.cloud, *gt, ChamferVariant::T).value;
  }
  if (g.json) {
    std::cout << doc.dump(2) << '\n';
  } else if (o.out.empty()) {
    write_xyz(result.cloud, std::cout);
  } else {
    for (const auto &[k, v] : doc.items()) {
      std::cout << k << ' ' << (v.is_number_float() ? format_sig9(v.get<double>()) : v.dump())
                << '\n';
    }
  }
  return 0;
}

// ---- profile

struct ProfileOptions {
  std::string loss = "dcd";
  double alpha = 1000.0;
  double lambda = 1.0;
  double l_max = 0.2;
  std::size_t steps = 200;
  std::size_t n = 1;
  std::string out;
};

int run_profile(const ProfileOptions &o, const Global &g) {
  LossKind loss = LossKind::dcd;
  if (o.loss == "cd-t") {
    loss = LossKind::cd_t;
  } else if (o.loss == "cd-p") {
    loss = LossKind::cd_p;
  }
  DcdParams params;
  params.alpha = o.alpha;
  params.lambda = o.lambda;
  std::vector<ProfilePoint> profile;
  try {
    params.validate();
    if (!(o.l_max > 0.0) || o.steps < 1 || o.n < 1) {
      throw Error(ErrorCode::InvalidParameter, "need --lmax > 0, --steps >= 1, --n >= 1");
    }
    std::vector<double> grid(o.steps + 1);
    for (std::size_t i = 0; i <= o.steps; ++i) {
      grid[i] = o.l_max * static_cast<double>(i) / static_cast<double>(o.steps);
    }
    profile = gradient_profile(loss, params, grid, o.n);
  } catch (const Error &e) {
    return report_error(e, exit_usage);
  }
  if (g.json) {
    json rows = json::array();
    for (const auto &p : profile) {
      rows.push_back({{"l", p.l}, {"grad", p.grad}});
    }
    json doc = {{"loss", o.loss}, {"alpha", o.alpha}, {"lambda", o.lambda}, {"points", rows}};
    if (loss == LossKind::dcd) {
      doc["peak"] = dcd_profile_peak(o.alpha);
    }
    std::cout << doc.dump(2) << '\n';
    return 0;
  }
  with_output(o.out, [&](std::ostream &out) {
    out << "l,grad\n";
    for (const auto &p : profile) {
      out << format_sig9(p.l) << ',' << format_sig9(p.grad) << '\n';
    }
  });
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Point-set similarity metrics, sweeps and benchmarks"};
  app.require_subcommand(1);
  Global g;
  std::uint64_t seed = 0;
  auto *seed_opt = app.add_option("--seed", seed, "Seed for randomized commands");
  app.add_option("--threads", g.threads, "Worker threads (0 = default)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--json", g.json, "JSON output");

  DistOptions dist;
  auto *dist_cmd = app.add_subcommand("dist", "Distances between two clouds");
  dist_cmd->add_option("a", dist.a)->required();
  dist_cmd->add_option("b", dist.b)->required();
  dist_cmd->add_flag("--cd", dist.cd, "Chamfer, squared distances");
  dist_cmd->add_flag("--cd-p", dist.cd_p, "Chamfer, plain distances");
  dist_cmd->add_flag("--hd", dist.hd, "Hausdorff");
  dist_cmd->add_flag("--dcd", dist.use_dcd, "Density-aware Chamfer");
  dist_cmd->add_flag("--emd", dist.emd, "Earth mover's distance (auction)");
  dist_cmd->add_flag("--emd-exact", dist.emd_exact, "Use the exact solver for --emd");
  dist_cmd->add_flag("--per-point", dist.per_point, "Include per-point terms in JSON");
  dist_cmd->add_option("--alpha", dist.alpha);
  dist_cmd->add_option("--lambda", dist.lambda);
  dist_cmd->add_option("--mode", dist.mode)
      ->check(CLI::IsMember({"squared", "euclidean"}));
  dist_cmd->add_option("--variant", dist.variant, "Unequal sizes: naive or e")
      ->check(CLI::IsMember({"naive", "e"}));
  dist_cmd->add_option("--emd-eps", dist.emd_eps);
  dist_cmd->add_option("--emd-iters", dist.emd_iters);
  dist_cmd->add_option("--emd-norm", dist.emd_norm)->check(CLI::IsMember({"sum", "mean"}));

  SweepOptions sweep;
  auto *sweep_cmd = app.add_subcommand("sweep", "Degradation sweep from a JSON config");
  sweep_cmd->add_option("config", sweep.config)->required();
  sweep_cmd->add_option("--csv", sweep.csv, "Summary CSV (default stdout)");
  sweep_cmd->add_option("--json-out", sweep.json_out, "Report JSON file");
  sweep_cmd->add_option("--samples", sweep.samples, "Per-trial CSV file");

  AccumulateOptions acc;
  auto *acc_cmd = app.add_subcommand("accumulate", "Accumulation curve of a CSV column");
  acc_cmd->add_option("input", acc.input)->required();
  acc_cmd->add_option("--column", acc.column)->required();
  acc_cmd->add_option("--out", acc.out, "Curve CSV file");

  BenchOptions bench;
  auto *bench_cmd = app.add_subcommand("bench", "Wall-time medians of cd, dcd and emd");
  bench_cmd->add_option("--sizes", bench.sizes)->delimiter(',')->check(CLI::Range(64, 1 << 20));
  bench_cmd->add_option("--trials", bench.trials)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench.out, "Timing CSV file");
  bench_cmd->add_flag("--strict", bench.strict, "Exit 4 when an ordering check fails");

  DownsampleOptions ds;
  auto *ds_cmd = app.add_subcommand("downsample", "Score-guided down-sampling");
  ds_cmd->add_option("coarse", ds.coarse)->required();
  ds_cmd->add_option("rec", ds.rec)->required();
  ds_cmd->add_option("--gt", ds.gt);
  ds_cmd->add_option("--scorer", ds.scorer, "oracle[:t] or constant[:z]");
  ds_cmd->add_option("--out", ds.out);
  ds_cmd->add_option("-m,--points", ds.m);
  ds_cmd->add_option("--beta", ds.beta);
  ds_cmd->add_option("--gamma", ds.gamma);
  ds_cmd->add_option("--upscale", ds.upscale);

  ProfileOptions prof;
  auto *prof_cmd = app.add_subcommand("profile", "Gradient magnitude against pair distance");
  prof_cmd->add_option("--loss", prof.loss)->check(CLI::IsMember({"cd-t", "cd-p", "dcd"}));
  prof_cmd->add_option("--alpha", prof.alpha);
  prof_cmd->add_option("--lambda", prof.lambda);
  prof_cmd->add_option("--lmax", prof.l_max);
  prof_cmd->add_option("--steps", prof.steps, "Grid intervals on [0, lmax]");
  prof_cmd->add_option("--n", prof.n);
  prof_cmd->add_option("--out", prof.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return exit_usage;
  }
  if (*seed_opt) {
    g.seed = seed;
  }
  set_threads(g.threads);

  try {
    if (*dist_cmd) {
      return run_dist(dist, g);
    }
    if (*sweep_cmd) {
      return run_sweep_cmd(sweep, g);
    }
    if (*acc_cmd) {
      return run_accumulate(acc, g);
    }
    if (*bench_cmd) {
      return run_bench(bench, g);
    }
    if (*ds_cmd) {
      return run_downsample(ds, g);
    }
    return run_profile(prof, g);
  } catch (const UsageError &e) {
    return report_error(e, exit_usage);
  } catch (const Error &e) {
    return report_error(e, e.code() == ErrorCode::ParseError ? exit_usage : exit_precondition);
  }
}
