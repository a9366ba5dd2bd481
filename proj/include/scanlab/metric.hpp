#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scanlab/cluster.hpp"
#include "scanlab/clusters.hpp"
#include "scanlab/kernels.hpp"

namespace scanlab {

inline constexpr double kSqrt2 = 1.4142135623730951;

/// delta(K, L) = sqrt(2) * (1 - |K ∩ L| / sqrt(|K| |L|))^{1/2}. Throws DomainError on empty input.
double delta(std::span<const NodeId> k, std::span<const NodeId> l);
inline double delta(const Cluster& k, const Cluster& l) { return delta(k.ids(), l.ids()); }

/// delta from the three counts, clamped into [0, sqrt(2)].
double delta_from_counts(std::size_t k, std::size_t l, std::size_t common) noexcept;

/// A greedy epsilon-packing of a cluster stream, in enumeration order.
struct EpsNet {
  double epsilon = 0.0;
  ClusterList members;
  Metadata family;
};

/// Node -> member incidence lists, for computing distances from one cluster to every
/// member by counting intersections only where they are nonzero.
class MemberIndex {
 public:
  explicit MemberIndex(std::size_t node_count = 0) : by_node_(node_count) {}
  void add(std::span<const NodeId> ids, std::size_t size);
  std::size_t size() const noexcept { return sizes_.size(); }
  /// min_j delta(K, member_j) and the argmin (smallest index on ties). `scratch` must hold
  /// size() zeros and is returned zeroed. Members sharing no node sit at sqrt(2).
  std::pair<double, std::size_t> nearest(std::span<const NodeId> k, std::vector<std::uint32_t>& scratch,
                                         std::vector<std::size_t>& touched) const;

 private:
  std::vector<std::vector<std::uint32_t>> by_node_;
  std::vector<std::size_t> sizes_;
};

/// Admits a cluster iff its delta to every admitted member exceeds epsilon.
/// Requires 0 < epsilon <= sqrt(2).
EpsNet build_net(ClusterStream& stream, double epsilon);
EpsNet build_net(const ClusterList& clusters, double epsilon, Metadata family = {});

struct CoverReport {
  double epsilon = 0.0;
  double max_min_dist = 0.0;
  std::size_t worst_index = 0;  // position of the witness in the checked list
  Cluster worst;
  std::size_t checked = 0;
  bool pass = true;
};

/// max over K in `clusters` of min_j delta(K, K_j); pass iff <= net.epsilon.
CoverReport verify_cover(const EpsNet& net, const ClusterList& clusters, std::size_t node_count,
                         ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace scanlab
