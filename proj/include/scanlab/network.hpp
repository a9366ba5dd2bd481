#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scanlab/cluster.hpp"

namespace scanlab {

/// Geometry of a node set: integer lattice with the shortest-path (l1) distance, or
/// points of the unit cube with the Euclidean distance.
enum class Mode { LatticeL1, EuclideanL2 };

std::string_view to_string(Mode mode) noexcept;
/// Accepts "lattice", "lattice-l1", "euclidean", "euclidean-l2".
Mode parse_mode(std::string_view text);

/// The network V_m: an immutable indexed list of node coordinates.
///
/// Lattice mode holds {0,...,side-1}^d in row-major id order. Euclidean mode holds
/// arbitrary distinct points of [0,1]^d, with a uniform bucket grid for range queries.
class NodeSet {
 public:
  /// Validates the invariants (unique coordinates; lattice completeness; unit cube).
  static NodeSet from_coordinates(int dim, Mode mode, std::vector<double> coords);

  int dim() const noexcept { return dim_; }
  Mode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return size_; }
  /// Lattice side length m^{1/d}; zero in Euclidean mode.
  int side() const noexcept { return side_; }

  std::span<const double> coord(NodeId id) const noexcept {
    return {coords_.data() + static_cast<std::size_t>(id) * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> coordinates() const noexcept { return coords_; }

  /// Distance in the mode's norm (l1 on the lattice, l2 otherwise).
  double distance(std::span<const double> a, std::span<const double> b) const noexcept;

  /// Lattice only: id of integer coordinates, or nullopt outside V_m.
  std::optional<NodeId> lattice_id(std::span<const long> coords) const noexcept;

  /// Lattice only: calls f(neighbor) for each l1-distance-1 neighbor inside V_m.
  template <class F>
  void for_each_neighbor(NodeId id, F&& f) const {
    std::size_t stride = 1;
    for (int axis = dim_ - 1; axis >= 0; --axis) {
      const auto c = static_cast<long>(coords_[static_cast<std::size_t>(id) * dim_ + axis]);
      if (c > 0) f(static_cast<NodeId>(id - stride));
      if (c + 1 < side_) f(static_cast<NodeId>(id + stride));
      stride *= static_cast<std::size_t>(side_);
    }
  }

  /// Calls f(id) for every node whose coordinates may lie in the box [lo, hi]
  /// (a superset; callers test exact membership).
  template <class F>
  void for_each_in_box(std::span<const double> lo, std::span<const double> hi, F&& f) const;

 private:
  NodeSet() = default;
  void build_buckets();

  int dim_ = 0;
  Mode mode_ = Mode::LatticeL1;
  std::size_t size_ = 0;
  int side_ = 0;
  std::vector<double> coords_;

  // Euclidean bucket grid: cells_per_axis^d cells in row-major order.
  int cells_per_axis_ = 1;
  std::vector<std::size_t> bucket_start_;
  std::vector<NodeId> bucket_ids_;
};

/// {0,...,side-1}^d in lattice-l1 mode; id = sum coord_i * side^{d-1-i}.
NodeSet make_lattice(int dim, int side);

/// m i.i.d. uniform points of [0,1]^d in Euclidean mode, reproducible from `seed`.
NodeSet make_uniform_cloud(int dim, std::size_t m, std::uint64_t seed);

/// The regular lattice rescaled into [0,1]^d (cell centers (i + 1/2)/side), Euclidean mode.
NodeSet make_grid_cloud(int dim, int side);

/// Nodes strictly within distance r of `center`, in the mode's norm (open ball).
Cluster ball_nodes(const NodeSet& net, std::span<const double> center, double r);
/// Nodes at distance <= r of `center` (closed ball).
Cluster closed_ball_nodes(const NodeSet& net, std::span<const double> center, double r);

struct SpreadProbe {
  NodeId center = 0;
  double radius = 0.0;  // in unit-cube units
  std::size_t count = 0;
  double lower = 0.0;   // C^{-1} m r^d
  double upper = 0.0;   // C m r^d
  bool ok = true;
};

/// Result of probing the even-spread condition C^{-1} m r^d <= |B(x,r) ∩ V| <= C m r^d.
struct SpreadCertificate {
  double constant = 1.0;
  double r_star = 0.0;
  std::uint64_t seed = 0;
  std::vector<SpreadProbe> probes;
  std::optional<std::size_t> first_violation;
  bool pass = false;
};

/// Samples `probes` pairs (x, r) with x a node and r log-uniform in [r_star, 1].
/// Lattice radii are expressed in unit-cube units and scaled by `side`.
SpreadCertificate check_spread(const NodeSet& net, double constant, double r_star,
                               std::size_t probes, std::uint64_t seed);

/// Evaluates one probe exactly. Exposed for exhaustive checks.
SpreadProbe spread_probe(const NodeSet& net, double constant, NodeId center, double r);

// ---------------------------------------------------------------------------

template <class F>
void NodeSet::for_each_in_box(std::span<const double> lo, std::span<const double> hi,
                              F&& f) const {
  std::vector<long> first(dim_), last(dim_), cur(dim_);
  const bool lattice = mode_ == Mode::LatticeL1;
  const long limit = lattice ? side_ - 1 : cells_per_axis_ - 1;
  const double scale = lattice ? 1.0 : static_cast<double>(cells_per_axis_);
  for (int a = 0; a < dim_; ++a) {
    const double l = lattice ? std::ceil(lo[a]) : std::floor(lo[a] * scale);
    const double h = lattice ? std::floor(hi[a]) : std::floor(hi[a] * scale);
    first[a] = static_cast<long>(std::max(0.0, l));
    last[a] = static_cast<long>(std::min(static_cast<double>(limit), h));
    if (first[a] > last[a]) return;
  }
  cur = first;
  const auto stride_base = lattice ? static_cast<std::size_t>(side_)
                                   : static_cast<std::size_t>(cells_per_axis_);
  while (true) {
    std::size_t index = 0;
    for (int a = 0; a < dim_; ++a) index = index * stride_base + static_cast<std::size_t>(cur[a]);
    if (lattice) {
      f(static_cast<NodeId>(index));
    } else {
      for (std::size_t k = bucket_start_[index]; k < bucket_start_[index + 1]; ++k) f(bucket_ids_[k]);
    }
    int a = dim_ - 1;
    while (a >= 0 && cur[a] == last[a]) {
      cur[a] = first[a];
      --a;
    }
    if (a < 0) break;
    ++cur[a];
  }
}

}  // namespace scanlab
