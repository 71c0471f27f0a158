#ifndef PCSIM_PARALLEL_HPP
#define PCSIM_PARALLEL_HPP

#include <cstddef>

namespace pcsim {

// Kernels take an execution policy. `serial` is the reference path kept for
// testing; `parallel` splits the data-parallel loop across OpenMP threads and
// must produce bit-identical output (per-element results are written to
// fixed slots and reduced in index order).
enum class Exec { serial, parallel };

bool parallelism_supported() noexcept;
int max_threads() noexcept;

/// 0 restores the OpenMP default.
void set_threads(int n) noexcept;

} // namespace pcsim

#endif // PCSIM_PARALLEL_HPP
