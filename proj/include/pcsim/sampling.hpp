#ifndef PCSIM_SAMPLING_HPP
#define PCSIM_SAMPLING_HPP

#include <cstddef>
#include <vector>

#include "pcsim/parallel.hpp"
#include "pcsim/point_cloud.hpp"

namespace pcsim {

/// Farthest point sampling. Starts at `seed_id`; every following pick
/// maximises the distance to the already selected set, ties to the lower
/// index. Returns the picked indices in selection order.
std::vector<std::size_t> fps_indices(const PointCloud &cloud, std::size_t m,
                                     std::size_t seed_id = 0,
                                     Exec exec = Exec::parallel);

PointCloud fps(const PointCloud &cloud, std::size_t m, std::size_t seed_id = 0,
               Exec exec = Exec::parallel);

/// Mean distance from each point to its nearest other point.
double mean_nn_spacing(const PointCloud &cloud, Exec exec = Exec::parallel);

} // namespace pcsim

#endif // PCSIM_SAMPLING_HPP
