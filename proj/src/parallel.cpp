#include "pcsim/parallel.hpp"

#ifdef PCSIM_HAVE_OPENMP
#include <omp.h>
#endif

namespace pcsim {

namespace {
#ifdef PCSIM_HAVE_OPENMP
const int default_threads = omp_get_max_threads();
#endif
} // namespace

bool parallelism_supported() noexcept {
#ifdef PCSIM_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() noexcept {
#ifdef PCSIM_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) noexcept {
#ifdef PCSIM_HAVE_OPENMP
  omp_set_num_threads(n > 0 ? n : default_threads);
#else
  (void)n;
#endif
}

} // namespace pcsim
