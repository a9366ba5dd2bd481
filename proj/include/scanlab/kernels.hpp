#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include "scanlab/cluster.hpp"

namespace scanlab {

/// Selects the serial reference loop or the OpenMP loop for the reduction kernels.
/// Both return identical results: ties go to the smallest index.
enum class ExecPolicy { Serial, Parallel };

struct ArgMax {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = 0;

  void offer(double v, std::size_t i) noexcept {
    if (v > value || (v == value && i < index)) {
      value = v;
      index = i;
    }
  }
};

/// max_i score(state, i) over [0, n). `make_state()` builds per-worker scratch.
template <class MakeState, class Score>
ArgMax argmax_serial(std::size_t n, MakeState&& make_state, Score&& score) {
  ArgMax best;
  auto state = make_state();
  for (std::size_t i = 0; i < n; ++i) best.offer(score(state, i), i);
  return best;
}

template <class MakeState, class Score>
ArgMax argmax_parallel(std::size_t n, MakeState&& make_state, Score&& score) {
  ArgMax best;
#pragma omp parallel
  {
    ArgMax local;
    auto state = make_state();
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
      local.offer(score(state, static_cast<std::size_t>(i)), static_cast<std::size_t>(i));
#pragma omp critical(scanlab_argmax)
    best.offer(local.value, local.index);
  }
  return best;
}

template <class MakeState, class Score>
ArgMax argmax(std::size_t n, ExecPolicy policy, MakeState&& make_state, Score&& score) {
  if (policy == ExecPolicy::Serial || n < 64) return argmax_serial(n, make_state, score);
  return argmax_parallel(n, make_state, score);
}

/// Runs body(i) for i in [0, n); each i writes only its own outputs.
template <class Body>
void parallel_for(std::size_t n, ExecPolicy policy, Body&& body) {
  if (policy == ExecPolicy::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) body(static_cast<std::size_t>(i));
}

/// (sum_{v in K} x_v - |K| mean0) / (sigma sqrt|K|).
inline double standardized(std::span<const NodeId> ids, const double* values, double mean0,
                           double sigma) noexcept {
  double s = 0.0;
  for (NodeId v : ids) s += values[v];
  const auto k = static_cast<double>(ids.size());
  return (s - k * mean0) / (sigma * std::sqrt(k));
}

/// Scan maximum of the standardized sum over every cluster of a list.
ArgMax scan_max_serial(const ClusterList& clusters, std::span<const double> values, double mean0,
                       double sigma);
ArgMax scan_max_parallel(const ClusterList& clusters, std::span<const double> values, double mean0,
                         double sigma);
ArgMax scan_max(const ClusterList& clusters, std::span<const double> values, double mean0, double sigma,
                ExecPolicy policy);

/// Worker count of the parallel kernels (1 without OpenMP).
int max_threads() noexcept;
void set_threads(int n) noexcept;

}  // namespace scanlab
