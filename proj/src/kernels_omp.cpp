#include "scanlab/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace scanlab {

ArgMax scan_max_parallel(const ClusterList& clusters, std::span<const double> values, double mean0,
                         double sigma) {
  const double* x = values.data();
  return argmax_parallel(clusters.size(), [] { return 0; },
                         [&](int, std::size_t i) { return standardized(clusters[i], x, mean0, sigma); });
}

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) noexcept {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace scanlab
