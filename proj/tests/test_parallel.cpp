// Serial reference and OpenMP kernels must give bit-identical results.
#include "helpers.hpp"
#include "pcsim/grad.hpp"
#include "pcsim/metrics.hpp"
#include "pcsim/neighbor_index.hpp"
#include "pcsim/parallel.hpp"
#include "pcsim/sampling.hpp"
#include "pcsim/transport.hpp"

using namespace pcsim;

TEST_CASE("serial and parallel kernels agree bit for bit") {
  std::mt19937_64 rng(71);
  const auto a = random_cloud(rng, 1500);
  const auto b = random_cloud(rng, 1500);
  const auto c = random_cloud(rng, 900);
  const NeighborIndex bi(b);
  for (int threads : {1, 2, 3}) {
    set_threads(threads);
    const auto s = nearest_pass(a, bi, Exec::serial);
    const auto p = nearest_pass(a, bi, Exec::parallel);
    CHECK(s.ids == p.ids);
    CHECK(s.squared_distances == p.squared_distances);
    CHECK(knn_pass(a, bi, 4, Exec::serial).neighbors.size() ==
          knn_pass(a, bi, 4, Exec::parallel).neighbors.size());
    CHECK(fps_indices(a, 300, 5, Exec::serial) == fps_indices(a, 300, 5, Exec::parallel));
    CHECK(chamfer(a, b, ChamferVariant::T, Exec::serial).value ==
          chamfer(a, b, ChamferVariant::T, Exec::parallel).value);
    CHECK(hausdorff(a, c, Exec::serial) == hausdorff(a, c, Exec::parallel));
    CHECK(dcd(a, b, {}, Exec::serial).value == dcd(a, b, {}, Exec::parallel).value);
    CHECK(dcd_unequal(a, c, {}, UnequalVariant::E, Exec::serial).value ==
          dcd_unequal(a, c, {}, UnequalVariant::E, Exec::parallel).value);
    CHECK(cost_matrix(c, c, Exec::serial) == cost_matrix(c, c, Exec::parallel));
    const auto ea = emd_approx(c, random_cloud(rng, 900), 0.004, 3000, Exec::serial);
    CHECK(ea.converged);
    const auto ga = loss_and_grad(a, b, LossKind::dcd, {}, GradWrt::both, Exec::serial);
    const auto gb = loss_and_grad(a, b, LossKind::dcd, {}, GradWrt::both, Exec::parallel);
    CHECK(ga.loss_value == gb.loss_value);
    CHECK(ga.grad_s1 == gb.grad_s1);
    CHECK(ga.grad_s2 == gb.grad_s2);
  }
  set_threads(0);
}

TEST_CASE("auction result does not depend on the execution policy") {
  std::mt19937_64 rng(72);
  const auto a = random_cloud(rng, 400);
  const auto b = random_cloud(rng, 400);
  set_threads(3);
  const auto s = emd_approx(a, b, 0.004, 3000, Exec::serial);
  const auto p = emd_approx(a, b, 0.004, 3000, Exec::parallel);
  set_threads(0);
  CHECK(s.mapping == p.mapping);
  CHECK(s.total_cost == p.total_cost);
  CHECK(s.iterations == p.iterations);
}
