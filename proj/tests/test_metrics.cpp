#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "pcsim/metrics.hpp"

using namespace pcsim;

namespace {

double sum_of(const std::vector<double> &v) { return std::accumulate(v.begin(), v.end(), 0.0); }

DcdParams params(double alpha, double lambda = 1.0, ExponentMode mode = ExponentMode::squared) {
  DcdParams p;
  p.alpha = alpha;
  p.lambda = lambda;
  p.mode = mode;
  return p;
}

} // namespace

TEST_CASE("chamfer: hand values") {
  const PointCloud o({{0, 0, 0}});
  const PointCloud x1({{1, 0, 0}});
  const PointCloud xh({{0.5, 0, 0}});
  CHECK(chamfer(o, x1, ChamferVariant::T).value == 2.0);
  CHECK(chamfer(o, x1, ChamferVariant::P).value == 2.0);
  CHECK(chamfer(o, xh, ChamferVariant::T).value == 0.5);
  CHECK(chamfer(o, xh, ChamferVariant::P).value == 1.0);
  CHECK(chamfer(x1, x1, ChamferVariant::T).value == 0.0);
}

TEST_CASE("hausdorff: hand values") {
  const PointCloud a({{0, 0, 0}, {3, 0, 0}});
  const PointCloud b({{0, 0, 0}});
  CHECK(hausdorff(a, b) == 3.0);
  CHECK(hausdorff(b, a) == 3.0);
  CHECK(hausdorff(a, a) == 0.0);
  CHECK(hausdorff(b, PointCloud({{0, 0, 0.25}})) == 0.25);
}

TEST_CASE("query frequencies") {
  const PointCloud src({{0, 0, 0}, {0.2, 0, 0}});
  const PointCloud tgt({{0, 0, 0}, {10, 0, 0}});
  const auto q = query_frequencies(src, NeighborIndex(tgt));
  CHECK(q.counts == std::vector<std::size_t>{2, 0});
  CHECK(q.total() == 2);

  std::mt19937_64 rng(1);
  const auto a = random_cloud(rng, 100);
  const auto self = query_frequencies(a, NeighborIndex(a));
  CHECK(std::all_of(self.counts.begin(), self.counts.end(), [](auto c) { return c == 1; }));
  const auto b = random_cloud(rng, 37);
  CHECK(query_frequencies(a, NeighborIndex(b)).total() == 100);
}

TEST_CASE("dcd: hand values") {
  const PointCloud o({{0, 0, 0}});
  const PointCloud x1({{1, 0, 0}});
  const double expect = 1.0 - std::exp(-1.0);
  CHECK(dcd(o, x1, params(1, 1, ExponentMode::euclidean)).value == doctest::Approx(expect).epsilon(1e-15));
  CHECK(dcd(o, x1, params(1)).value == doctest::Approx(expect).epsilon(1e-15));
  CHECK(std::abs(dcd(o, x1, params(1000)).value - 1.0) < 1e-6);
  CHECK(dcd(x1, x1).value == 0.0);

  // Both s1 points query y0; y1 is far away.
  const double e = 1e-3;
  const PointCloud s1({{0, 0, 0}, {e, 0, 0}});
  const PointCloud s2({{0, 0, 0}, {5, 0, 0}});
  const auto r = dcd(s1, s2, params(1));
  CHECK(r.src_to_tgt.counts == std::vector<std::size_t>{2, 0});
  CHECK(r.per_point_src[0] == doctest::Approx((1.0 - 0.5) / 4.0));
  CHECK(r.per_point_src[1] == doctest::Approx((1.0 - 0.5 * std::exp(-e * e)) / 4.0));
  CHECK(r.value == doctest::Approx(oracle::dcd(pts_of(s1), pts_of(s2), 1, 1, true)));
}

TEST_CASE("dcd: argument errors") {
  const PointCloud a({{0, 0, 0}});
  const PointCloud b({{0, 0, 0}, {1, 1, 1}});
  CHECK(error_of([&] { dcd(a, b); }) == ErrorCode::CardinalityMismatch);
  CHECK(error_of([&] { dcd(a, a, params(0)); }) == ErrorCode::InvalidParameter);
  CHECK(error_of([&] { dcd(a, a, params(1, 1.5)); }) == ErrorCode::InvalidParameter);
  CHECK(error_of([&] { dcd(a, a, params(1, -0.1)); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("metrics agree with the brute-force oracles") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + rng() % 96;
    const std::size_t m = trial % 3 == 0 ? n : 1 + rng() % 96;
    const bool lattice = trial % 5 == 0;
    const auto a = lattice ? oracle::lattice_points(rng, n) : oracle::random_points(rng, n, 0.3);
    const auto b = lattice ? oracle::lattice_points(rng, m) : oracle::random_points(rng, m, 0.3);
    const auto ca = cloud_of(a), cb = cloud_of(b);
    CHECK(close_rel(chamfer(ca, cb, ChamferVariant::T).value, oracle::chamfer_t(a, b)));
    CHECK(close_rel(chamfer(ca, cb, ChamferVariant::P).value, oracle::chamfer_p(a, b)));
    CHECK(close_rel(hausdorff(ca, cb), oracle::hausdorff(a, b)));

    const double alpha = lattice ? 0.5 : 40.0;
    const double lambda = trial % 4 == 0 ? 0.5 : 1.0;
    const auto mode = trial % 2 == 0 ? ExponentMode::squared : ExponentMode::euclidean;
    const bool sq = mode == ExponentMode::squared;
    const auto p = params(alpha, lambda, mode);
    if (n == m) {
      CHECK(close_rel(dcd(ca, cb, p).value, oracle::dcd(a, b, alpha, lambda, sq)));
    }
    const auto &big = n >= m ? a : b;
    const auto &small = n >= m ? b : a;
    CHECK(close_rel(dcd_unequal(ca, cb, p, UnequalVariant::E).value,
                    oracle::dcd_unequal(big, small, alpha, lambda, sq, true)));
    CHECK(close_rel(dcd_unequal(ca, cb, p, UnequalVariant::naive).value,
                    oracle::dcd_unequal(big, small, alpha, lambda, sq, false)));
  }
}

TEST_CASE("symmetry is exact") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_cloud(rng, 64);
    const auto b = random_cloud(rng, trial % 2 ? 64 : 40);
    CHECK(chamfer(a, b, ChamferVariant::T).value == chamfer(b, a, ChamferVariant::T).value);
    CHECK(chamfer(a, b, ChamferVariant::P).value == chamfer(b, a, ChamferVariant::P).value);
    CHECK(hausdorff(a, b) == hausdorff(b, a));
    if (a.size() == b.size()) {
      CHECK(dcd(a, b, params(30)).value == dcd(b, a, params(30)).value);
    }
    const auto e1 = dcd_unequal(a, b, params(30), UnequalVariant::E);
    const auto e2 = dcd_unequal(b, a, params(30), UnequalVariant::E);
    CHECK(e1.value == e2.value);
  }
}

TEST_CASE("per-point contributions reconstruct the value") {
  std::mt19937_64 rng(9);
  const auto a = random_cloud(rng, 80, 0.2);
  const auto b = random_cloud(rng, 50, 0.2);
  const auto c = random_cloud(rng, 80, 0.2);
  for (const auto &r : {chamfer(a, b, ChamferVariant::T), chamfer(a, b, ChamferVariant::P),
                        dcd(a, c, params(50)), dcd_unequal(a, b, params(50), UnequalVariant::E),
                        dcd_unequal(b, a, params(50), UnequalVariant::naive)}) {
    CHECK(close_rel(r.value, sum_of(r.per_point_src) + sum_of(r.per_point_tgt)));
  }
  const auto sw = dcd_unequal(b, a, params(50), UnequalVariant::E);
  CHECK(sw.swapped);
  CHECK(sw.per_point_src.size() == b.size());
  CHECK(sw.per_point_tgt.size() == a.size());
  CHECK_FALSE(dcd_unequal(a, b, params(50), UnequalVariant::E).swapped);
}

TEST_CASE("unequal variants reduce to dcd at equal sizes") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_cloud(rng, 70, 0.2);
    const auto b = random_cloud(rng, 70, 0.2);
    const auto p = params(100, trial % 2 ? 1.0 : 0.3);
    const double base = dcd(a, b, p).value;
    CHECK(dcd_unequal(a, b, p, UnequalVariant::E).value == base);
    CHECK(dcd_unequal(a, b, p, UnequalVariant::naive).value == base);
  }
}

TEST_CASE("DCD-E of a cloud against itself duplicated is zero") {
  std::mt19937_64 rng(12);
  const auto s = pts_of(random_cloud(rng, 32));
  oracle::Pts twice = s;
  twice.insert(twice.end(), s.begin(), s.end());
  const auto r = dcd_unequal(cloud_of(twice), cloud_of(s), params(1000), UnequalVariant::E);
  CHECK(r.value == doctest::Approx(0.0).epsilon(0).scale(1).epsilon(1e-15));
  CHECK(std::all_of(r.src_to_tgt.counts.begin(), r.src_to_tgt.counts.end(),
                    [](auto c) { return c == 2; }));
}

TEST_CASE("naive variant can report negative contributions") {
  // Six points around one target: the target is queried 6 times but eta = 3,
  // so the others see n_y < eta and get weight eta/n_y > 1.
  const PointCloud big({{0, 0, 0}, {0.001, 0, 0}, {0, 0.001, 0}, {5, 0, 0}, {5.001, 0, 0}, {5, 0.001, 0}});
  const PointCloud small({{0, 0, 0}, {5, 0, 0}});
  const auto r = dcd_unequal(big, small, params(1), UnequalVariant::naive);
  CHECK(*std::min_element(r.per_point_src.begin(), r.per_point_src.end()) >= -1.0);
  const PointCloud big2({{0, 0, 0}, {0.001, 0, 0}, {5, 0, 0}, {5.001, 0, 0}, {5.002, 0, 0}, {5.003, 0, 0}});
  const auto r2 = dcd_unequal(big2, small, params(1), UnequalVariant::naive);
  CHECK(*std::min_element(r2.per_point_src.begin(), r2.per_point_src.end()) < 0.0);
  const auto e2 = dcd_unequal(big2, small, params(1), UnequalVariant::E);
  CHECK(*std::min_element(e2.per_point_src.begin(), e2.per_point_src.end()) >= 0.0);
}

TEST_CASE("dcd and DCD-E stay in [0, 1]") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 60;
    const std::size_t m = trial % 2 ? n : 1 + rng() % 60;
    auto a = oracle::random_points(rng, n, 0.5);
    auto b = oracle::random_points(rng, m, 0.5);
    if (trial % 3 == 0) {
      b[0] = {100, 0, 0};
    }
    const auto p = params(trial % 4 == 0 ? 1e-3 : 1000.0, (trial % 5) / 4.0);
    const double e = dcd_unequal(cloud_of(a), cloud_of(b), p, UnequalVariant::E).value;
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
    if (n == m) {
      const double v = dcd(cloud_of(a), cloud_of(b), p).value;
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("first-order relation to chamfer for small distances") {
  std::mt19937_64 rng(14);
  const auto a = oracle::random_points(rng, 50, 1.0);
  auto b = a;
  std::uniform_real_distribution<double> u(-0.002, 0.002);
  double max_d = 0.0;
  for (auto &p : b) {
    p += Point3{u(rng), u(rng), u(rng)};
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    max_d = std::max(max_d, std::sqrt(oracle::sq(a[i], b[i])));
  }
  const double d = dcd(cloud_of(a), cloud_of(b), params(1, 1, ExponentMode::euclidean)).value;
  const double c = chamfer(cloud_of(a), cloud_of(b), ChamferVariant::P).value;
  CHECK(std::abs(d - 0.5 * c) <= max_d * max_d);
}

TEST_CASE("raising local density of s2 never lowers query counts") {
  std::mt19937_64 rng(15);
  const auto s1 = random_cloud(rng, 80);
  auto s2 = pts_of(random_cloud(rng, 40));
  const auto before = query_frequencies(s1, NeighborIndex(cloud_of(s2)));
  const auto dup = s2[7];
  s2.push_back(dup);
  const auto after = query_frequencies(s1, NeighborIndex(cloud_of(s2)));
  CHECK(after.counts[7] == before.counts[7]);
  CHECK(after.counts.back() == 0);
}

TEST_CASE("a distant outlier moves dcd by a bounded amount") {
  // Grid in x <= 0 plus the origin; the outlier sits on +x, so its nearest
  // point in s1 is the origin at exactly d (then 10 d).
  oracle::Pts grid;
  for (int i = 1; i <= 4; ++i) {
    for (int j = -2; j <= 2; ++j) {
      grid.push_back({-0.05 * i, 0.05 * j, 0.0});
    }
  }
  const double d = 0.5;
  oracle::Pts s1 = grid, s2 = grid;
  s1.push_back({0, 0, 0});
  s1.push_back({-0.3, 0.3, 0.1});
  s2.push_back({0, 0, 0});
  s2.push_back({d, 0, 0});
  auto moved = s2;
  moved.back() = {10 * d, 0, 0};
  const double n = static_cast<double>(s1.size());
  const auto p = params(1000);
  const double delta_dcd =
      std::abs(dcd(cloud_of(s1), cloud_of(moved), p).value - dcd(cloud_of(s1), cloud_of(s2), p).value);
  const double delta_cd = chamfer(cloud_of(s1), cloud_of(moved), ChamferVariant::T).value -
                          chamfer(cloud_of(s1), cloud_of(s2), ChamferVariant::T).value;
  CHECK(delta_dcd <= 2.0 / n + 1e-6);
  CHECK(delta_cd == doctest::Approx(99.0 * d * d / n).epsilon(1e-12));
}
