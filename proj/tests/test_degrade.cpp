#include <cmath>
#include <set>

#include "helpers.hpp"
#include "pcsim/degrade.hpp"
#include "pcsim/metrics.hpp"
#include "pcsim/sampling.hpp"

using namespace pcsim;

TEST_CASE("synthetic shapes") {
  for (auto kind : {ShapeKind::sphere, ShapeKind::torus, ShapeKind::box, ShapeKind::lshape}) {
    const auto s = synth_shapes(kind, 500, 3);
    CHECK(s.cloud.size() == 500);
    CHECK(s.curvature.size() == 500);
    CHECK(std::all_of(s.curvature.begin(), s.curvature.end(), [](double c) { return c >= 0.0; }));
    for (const auto &p : s.cloud) {
      CHECK(std::abs(p.x) < 1.0);
      CHECK(std::abs(p.y) < 1.0);
      CHECK(std::abs(p.z) < 1.0);
    }
    CHECK(synth_shapes(kind, 500, 3).cloud == s.cloud);
    CHECK_FALSE(synth_shapes(kind, 500, 4).cloud == s.cloud);
    CHECK(shape_from_string(to_string(kind)) == kind);
  }
  const auto sphere = synth_shapes(ShapeKind::sphere, 200, 1);
  for (const auto &p : sphere.cloud) {
    CHECK(norm(p) == doctest::Approx(0.5));
  }
  CHECK(error_of([] { synth_shapes(ShapeKind::box, 10, 1); }) == ErrorCode::InvalidCount);
  CHECK(error_of([] { shape_from_string("cone"); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("mix_noise_imbalance") {
  const auto gt = synth_shapes(ShapeKind::torus, 8192, 5).cloud;
  DegradationSpec spec;
  spec.seed = 9;
  spec.target_size = 1024;
  spec.imbalance_n = 512;
  spec.noise_sigma = 1.0;
  const auto out = mix_noise_imbalance(gt, spec);
  CHECK(out.size() == 1024);
  CHECK(mix_noise_imbalance(gt, spec) == out);
  spec.seed = 10;
  CHECK_FALSE(mix_noise_imbalance(gt, spec) == out);

  // No noise, full partial region, balanced: close to a plain resample.
  DegradationSpec clean;
  clean.seed = 1;
  clean.target_size = 1024;
  clean.imbalance_n = 1024;
  clean.partial_keep_fraction = 1.0;
  const auto ref = fps(gt, 1024);
  const auto noop = mix_noise_imbalance(gt, clean);
  const auto baseline = fps(gt, 1024, 4000);
  CHECK(dcd(noop, ref).value < dcd(baseline, ref).value + 0.1);

  DegradationSpec bad = spec;
  bad.target_size = 10000;
  CHECK(error_of([&] { mix_noise_imbalance(gt, bad); }) == ErrorCode::InsufficientPoints);
  bad = spec;
  bad.partial_keep_fraction = 0.0;
  CHECK(error_of([&] { bad.validate(); }) == ErrorCode::InvalidParameter);
  bad = spec;
  bad.imbalance_n = 0;
  CHECK(error_of([&] { bad.validate(); }) == ErrorCode::InvalidParameter);
  bad = spec;
  bad.noise_sigma = -1;
  CHECK(error_of([&] { bad.validate(); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("imbalance at zero noise moves dcd more than chamfer") {
  // Averaged over a few shapes; larger imbalance_n is the balanced end.
  double cd_hi = 0, cd_lo = 0, dcd_hi = 0, dcd_lo = 0;
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto gt = synth_shapes(ShapeKind::sphere, 8192, s).cloud;
    const auto ref = fps(gt, 1024);
    DegradationSpec spec;
    spec.seed = s;
    spec.target_size = 1024;
    spec.imbalance_n = 2048;
    const auto balanced = mix_noise_imbalance(gt, spec);
    spec.imbalance_n = 128;
    const auto skewed = mix_noise_imbalance(gt, spec);
    cd_hi += chamfer(balanced, ref, ChamferVariant::T).value;
    cd_lo += chamfer(skewed, ref, ChamferVariant::T).value;
    dcd_hi += dcd(balanced, ref).value;
    dcd_lo += dcd(skewed, ref).value;
  }
  CHECK(dcd_lo > dcd_hi);
  CHECK(cd_lo > cd_hi);
}

TEST_CASE("inject_outliers") {
  std::mt19937_64 rng(3);
  const auto c = random_cloud(rng, 200, 0.1);
  const auto out = inject_outliers(c, 0.05, 100.0, 7);
  REQUIRE(out.size() == 200);
  std::size_t moved = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(out[i] == c[i])) {
      ++moved;
      CHECK(distance(out[i], c.centroid()) >= 90.0);
      CHECK(distance(out[i], c.centroid()) <= 110.0);
    }
  }
  CHECK(moved == 10);
  CHECK(inject_outliers(c, 0.0, 1.0, 7) == c);
  CHECK(error_of([&] { inject_outliers(c, 1.0, 1.0, 7); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("curvature_mix_sample") {
  const auto shape = synth_shapes(ShapeKind::box, 4000, 2);
  const auto uniform = curvature_mix_sample(shape.cloud, shape.curvature, 0.0, 500, 1);
  const auto curved = curvature_mix_sample(shape.cloud, shape.curvature, 0.75, 500, 1);
  CHECK(uniform.size() == 500);
  CHECK(curved.size() == 500);
  CHECK(curvature_mix_sample(shape.cloud, shape.curvature, 0.75, 500, 1) == curved);

  // Mean curvature of the selected points rises with R_c.
  auto mean_curv = [&](const PointCloud &c) {
    const NeighborIndex idx(shape.cloud);
    double s = 0;
    for (const auto &p : c) {
      s += shape.curvature[idx.nearest_one(p).id];
    }
    return s / c.size();
  };
  CHECK(mean_curv(curved) > mean_curv(uniform));

  const std::vector<double> short_curv(10, 1.0);
  CHECK(error_of([&] { curvature_mix_sample(shape.cloud, short_curv, 0.5, 100, 1); }) ==
        ErrorCode::ShapeMismatch);
  CHECK(error_of([&] { curvature_mix_sample(shape.cloud, shape.curvature, 1.5, 100, 1); }) ==
        ErrorCode::InvalidParameter);
}
