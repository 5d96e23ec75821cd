#include "netmon/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace netmon {

int parallel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace netmon
