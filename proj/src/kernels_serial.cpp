#include "scanlab/kernels.hpp"

namespace scanlab {

ArgMax scan_max_serial(const ClusterList& clusters, std::span<const double> values, double mean0,
                       double sigma) {
  const double* x = values.data();
  return argmax_serial(clusters.size(), [] { return 0; },
                       [&](int, std::size_t i) { return standardized(clusters[i], x, mean0, sigma); });
}

ArgMax scan_max(const ClusterList& clusters, std::span<const double> values, double mean0, double sigma,
                ExecPolicy policy) {
  if (policy == ExecPolicy::Serial) return scan_max_serial(clusters, values, mean0, sigma);
  return scan_max_parallel(clusters, values, mean0, sigma);
}

}  // namespace scanlab
