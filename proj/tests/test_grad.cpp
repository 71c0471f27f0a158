#include <cmath>

#include "helpers.hpp"
#include "pcsim/grad.hpp"

using namespace pcsim;

namespace {

DcdParams dparams(double alpha, double lambda = 1.0) {
  DcdParams p;
  p.alpha = alpha;
  p.lambda = lambda;
  return p;
}

} // namespace

TEST_CASE("loss values match the metrics") {
  std::mt19937_64 rng(31);
  const auto a = random_cloud(rng, 60, 0.2);
  const auto b = random_cloud(rng, 60, 0.2);
  const auto c = random_cloud(rng, 45, 0.2);
  CHECK(loss_value(a, b, LossKind::cd_t) == chamfer(a, b, ChamferVariant::T).value);
  CHECK(loss_value(a, b, LossKind::cd_p) == chamfer(a, b, ChamferVariant::P).value);
  CHECK(loss_value(a, b, LossKind::dcd, dparams(100)) == dcd(a, b, dparams(100)).value);
  CHECK(loss_value(a, b, LossKind::dcd, dparams(100, 0.5)) == dcd(a, b, dparams(100, 0.5)).value);
  CHECK(close_rel(loss_value(a, c, LossKind::dcd, dparams(100)),
                  dcd_unequal(a, c, dparams(100), UnequalVariant::naive).value));
  const auto g = loss_and_grad(a, b, LossKind::dcd, dparams(100), GradWrt::s1);
  CHECK(g.grad_s1.size() == a.size());
  CHECK(g.grad_s2.empty());
}

TEST_CASE("single pair gradients by hand") {
  const PointCloud a({{0, 0, 0}});
  const PointCloud b({{0.1, 0, 0}});
  const auto t = loss_and_grad(a, b, LossKind::cd_t);
  // d/dx (|x-y|^2 + |y-x|^2) = 4 (x - y)
  CHECK(t.grad_s1[0].x == doctest::Approx(-0.4));
  CHECK(t.grad_s2[0].x == doctest::Approx(0.4));
  const auto p = loss_and_grad(a, b, LossKind::cd_p);
  CHECK(p.grad_s1[0].x == doctest::Approx(-2.0));
  const auto d = loss_and_grad(a, b, LossKind::dcd, dparams(10));
  // value = 1 - exp(-alpha l^2); d/dx = -2 alpha l exp(-alpha l^2) * d l/dx
  CHECK(d.grad_s1[0].x == doctest::Approx(-2 * 10 * 0.1 * std::exp(-10 * 0.01)));
}

TEST_CASE("analytic gradients pass the finite-difference check") {
  std::mt19937_64 rng(32);
  for (auto loss : {LossKind::cd_t, LossKind::cd_p, LossKind::dcd}) {
    int ok = 0, switched = 0, total = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 4 + rng() % 30;
      const auto a = random_cloud(rng, n, 0.1);
      const auto b = random_cloud(rng, trial % 2 ? n : n + 3, 0.1);
      const auto fd = finite_difference_check(a, b, loss, dparams(60, 0.5));
      ++total;
      if (fd.max_rel_error < 1e-4) {
        ++ok;
      } else if (fd.assignment_switched) {
        ++switched;
      }
      CHECK(fd.components == 3 * (a.size() + b.size()));
    }
    INFO("loss ", to_string(loss));
    CHECK(ok + switched == total);
    CHECK(ok >= 19);
  }
}

TEST_CASE("gradient profiles") {
  const std::vector<double> l{0.0, 0.1, 0.5};
  const auto t = gradient_profile(LossKind::cd_t, {}, l);
  CHECK(t[2].grad == 1.0);
  const auto p = gradient_profile(LossKind::cd_p, {}, l);
  CHECK(p[0].grad == 1.0);
  const auto d = gradient_profile(LossKind::dcd, dparams(1000), l);
  CHECK(d[0].grad == 0.0);
  CHECK(d[1].grad == doctest::Approx(2 * 1000 * 0.1 * std::exp(-10.0)));

  // Peak of 2 a l exp(-a l^2) is at 1/sqrt(2a).
  std::vector<double> grid;
  for (int i = 0; i <= 4000; ++i) {
    grid.push_back(i * 1e-5);
  }
  const auto prof = gradient_profile(LossKind::dcd, dparams(1000), grid);
  const auto best = std::max_element(prof.begin(), prof.end(),
                                     [](auto &x, auto &y) { return x.grad < y.grad; });
  CHECK(std::abs(best->l - dcd_profile_peak(1000)) <= 1e-5);
  CHECK(dcd_profile_peak(1000) == doctest::Approx(1.0 / std::sqrt(2000.0)));
}
