#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "scanlab/cluster.hpp"
#include "scanlab/clusters.hpp"
#include "scanlab/detect.hpp"
#include "scanlab/models.hpp"
#include "scanlab/network.hpp"

namespace scanlab {

/// Per-time clusters K_0..K_{t_m}; slices may be empty.
struct ClusterSequence {
  std::vector<Cluster> slices;
  Metadata meta;

  int horizon() const noexcept { return static_cast<int>(slices.size()) - 1; }
  /// First / last t with a nonempty slice.
  std::optional<int> onset() const noexcept;
  std::optional<int> last() const noexcept;
  /// Number of anomalous (node, time) pairs.
  std::size_t total_pairs() const noexcept;
};

/// K_t = B(x0, r0) ∩ V for t >= t0 (open ball), empty before. Throws DomainError when the
/// base ball holds no node.
ClusterSequence make_cylinder(const NodeSet& net, std::span<const double> x0, double r0, int t0, int t_m);

/// K_t = {v : |v - x0| <= speed (t - t0)} for t >= t0 (closed balls).
ClusterSequence make_cone(const NodeSet& net, std::span<const double> x0, double speed, int t0, int t_m);

struct TrajectoryParams {
  double alpha = 1.0;   // Hoelder exponent in (0, 1]
  double kappa = 1.0;   // Hoelder constant
  double radius = 0.05; // r_m, in unit-cube units
  double xi = 1.0;      // time scale: K_t is centered at g((t - onset) / xi)
  /// Spacing of the control points in rescaled time s = (t - onset) / xi.
  double control_spacing = 1.0;
  int onset = 0;
  int end = 0;  // last nonempty slice
};

/// control[a][i] is coordinate a of the center g(i * control_spacing), in [0,1]; g is piecewise linear and
/// constant after the last control point. Lattice positions and radius are scaled by
/// side - 1. Throws HolderViolation naming the first offending pair.
ClusterSequence make_holder_trajectory(const NodeSet& net, const std::vector<std::vector<double>>& control,
                                       const TrajectoryParams& params, int t_m);

/// Richardson growth from x0: K_{t0} = {x0}; each step every vacant lattice neighbor of
/// the occupied set is occupied independently with probability p. Neighbors in sorted id
/// order consume one uniform each. When `max_radius` is set, only nodes within l1
/// distance max_radius of x0 can be occupied.
ClusterSequence richardson_grow(const NodeSet& net, NodeId x0, double p, int t0, int t_m, std::uint64_t seed,
                                std::optional<double> max_radius = std::nullopt);

struct LimitShapeRow {
  int t = 0;
  double delta = 0.0;
  double bound = 0.0;
  bool ok = true;
};

struct LimitShapeReport {
  std::vector<LimitShapeRow> rows;  // nonempty slices only
  bool report_only = false;
  bool pass = true;
};

/// delta(K_t, limit) against nu(t - t_K) at every nonempty t. Without nu the report
/// carries the delta column only and passes.
LimitShapeReport verify_limit_shape(const ClusterSequence& seq, const Cluster& limit,
                                    const std::function<double(int)>& nu = {});

struct VariationReport {
  double eta = 0.0;
  double worst_delta = 0.0;
  int worst_t = -1;
  int worst_s = -1;
  std::size_t pairs = 0;
  bool pass = true;
};

/// Checks delta(K_t, K_s) <= eta for all nonempty t != s with |t - s| <= xi.
VariationReport verify_bounded_variation(const ClusterSequence& seq, double eta, double xi);

/// {1, 2, 4, ...} up to t_m + 1, always ending with t_m + 1.
std::vector<int> dyadic_windows(int t_m);

/// Cylinders base x [t_m - w + 1, t_m] for every base cluster and window w; the index
/// in TestResult::argmax is base * windows.size() + window position.
TestResult scan_spacetime_cylinders(const Field& field, const ClusterList& bases, std::span<const int> windows,
                                    const NoiseModel& model, ExecPolicy policy = ExecPolicy::Parallel);

/// Standardized sum over every (node, time) pair of a sequence.
double sequence_sum(const Field& field, const ClusterSequence& seq, const NoiseModel& model);

/// Scan over an explicit list of cluster sequences.
TestResult scan_sequences(const Field& field, std::span<const ClusterSequence> sequences, const NoiseModel& model,
                          ExecPolicy policy = ExecPolicy::Parallel);

/// Trajectory class for the moving-ball scan: control values on a grid of `value_step`,
/// Hoelder-admissible pairwise, admitted when their sequence has bounded variation
/// (eta, xi_check). Control count is 1 + floor((end - onset) / (xi * spacing)).
std::vector<ClusterSequence> trajectory_family(const NodeSet& net, const TrajectoryParams& params, int t_m,
                                               double value_step, double eta, double xi_check,
                                               std::size_t max_sequences = 100000);

}  // namespace scanlab
