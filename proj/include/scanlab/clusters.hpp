#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "scanlab/cluster.hpp"
#include "scanlab/network.hpp"
#include "scanlab/rng.hpp"

namespace scanlab {

/// Ordered key/value metadata describing a cluster family; written into file headers.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// A single-pass generator of clusters of one family.
///
/// Streams never emit the same id set twice and never emit an empty cluster.
class ClusterStream {
 public:
  virtual ~ClusterStream() = default;
  virtual std::optional<Cluster> next() = 0;
  virtual Metadata describe() const = 0;
};

/// Drains up to `limit` clusters from a stream.
ClusterList collect(ClusterStream& stream, std::size_t limit = SIZE_MAX);

/// Largest cluster a geometric family may emit, as a fraction of m.
inline constexpr double kDefaultSizeCap = 0.25;

/// Remembers emitted id sets and enforces the size cap.
class EmissionFilter {
 public:
  EmissionFilter(std::size_t node_count, double size_cap_fraction);
  /// True if `c` is nonempty, within the cap, and not seen before (then records it).
  bool admit(const Cluster& c);

 private:
  struct Hasher {
    std::size_t operator()(const Cluster& c) const noexcept { return cluster_hash(c.ids()); }
  };
  std::size_t max_size_;
  std::unordered_set<Cluster, Hasher> seen_;
};

// ---------------------------------------------------------------------------
// Balls

class BallStream final : public ClusterStream {
 public:
  /// One candidate per node center x: B(x, radius) ∩ V.
  BallStream(const NodeSet& net, double radius, double size_cap = kDefaultSizeCap);
  std::optional<Cluster> next() override;
  Metadata describe() const override;
  /// Center node of the last emitted cluster.
  NodeId center() const noexcept { return last_center_; }

 private:
  const NodeSet* net_;
  double radius_;
  EmissionFilter filter_;
  std::size_t next_center_ = 0;
  NodeId last_center_ = 0;
};

// ---------------------------------------------------------------------------
// Thick clusters: sandwiched shapes B(c, lambda/kappa) ⊂ A ⊂ B(c, lambda).

enum class ShapeKind { Ball, Ellipsoid, Box };

std::string_view to_string(ShapeKind kind) noexcept;

/// An open domain of R^d with a declared center and scale.
///
/// Balls use the node set's norm. Ellipsoids are the norm's unit ball stretched by
/// `half_axes`; boxes are products of open intervals. An optional rotation (d = 2 only)
/// turns the shape about its center.
struct Shape {
  ShapeKind kind = ShapeKind::Ball;
  std::vector<double> center;
  std::vector<double> half_axes;
  double scale = 0.0;     // declared lambda: the shape lies inside B(center, scale)
  double rotation = 0.0;  // radians, d = 2 only

  static Shape ball(std::vector<double> center, double radius);
  /// Rejects max/min half-axis ratio above kappa.
  static Shape ellipsoid(std::vector<double> center, std::vector<double> half_axes, double kappa);
  static Shape box(std::vector<double> center, std::vector<double> half_axes, double kappa);

  bool contains(const NodeSet& net, std::span<const double> point) const noexcept;
  /// Radius of the largest ball around the center guaranteed inside the shape.
  double inner_radius() const noexcept;
};

/// Nodes inside a shape.
Cluster shape_nodes(const NodeSet& net, const Shape& shape);

enum ShapeFamily : unsigned { kBalls = 1u, kEllipsoids = 2u, kBoxes = 4u, kAllShapes = 7u };

struct ThickParams {
  double lambda_lo = 0.1;
  double lambda_hi = 0.1;
  double kappa = 1.0;
  unsigned shapes = kAllShapes;
  /// Center grid pitch is lambda * epsilon; scales step by a factor (1 + epsilon).
  double epsilon = 0.25;
};

/// The concrete dictionary of shapes of scale `lambda` centered at `center` whose
/// sandwich constant does not exceed kappa.
std::vector<Shape> shape_dictionary(const NodeSet& net, std::span<const double> center,
                                    double lambda, double kappa, unsigned shapes);

/// Scales lambda_lo * (1 + epsilon)^j not exceeding lambda_hi.
std::vector<double> scale_grid(double lambda_lo, double lambda_hi, double epsilon);

class ThickStream final : public ClusterStream {
 public:
  ThickStream(const NodeSet& net, ThickParams params, double size_cap = kDefaultSizeCap);
  std::optional<Cluster> next() override;
  Metadata describe() const override;
  const Shape& shape() const noexcept { return last_shape_; }

 private:
  bool advance();

  const NodeSet* net_;
  ThickParams params_;
  EmissionFilter filter_;
  std::vector<double> scales_;
  std::size_t scale_index_ = 0;
  std::vector<std::vector<double>> centers_;
  std::size_t center_index_ = 0;
  std::vector<Shape> pending_;
  Shape last_shape_;
};

// ---------------------------------------------------------------------------
// Thin tubes around graph curves f(x) = (x, g_1(x), ..., g_{d-1}(x)).

struct ThinParams {
  double alpha = 1.0;  // Hoelder exponent in (0, 1], checked at control points
  double kappa = 1.0;  // Hoelder constant
  double radius = 0.05;
  int control_points = 5;
  /// Control values are multiples of this step in [0,1]; must not exceed radius / 2.
  double value_step = 0.025;
  /// Tube radius must satisfy radius <= 1 / lambda_over_r_min.
  double lambda_over_r_min = 4.0;
  /// Guard on the number of admissible control sequences per coordinate.
  std::size_t max_sequences = 1'000'000;
};

/// Piecewise-linear curve x -> (x, g_1(x), ..., g_{d-1}(x)) through control values at
/// x_i = i / (n - 1). `values[j][i]` is g_{j+1}(x_i).
struct GraphCurve {
  std::vector<std::vector<double>> values;

  std::size_t control_points() const noexcept { return values.empty() ? 0 : values[0].size(); }
  /// Polyline vertices in R^d.
  std::vector<std::vector<double>> vertices() const;
  double length() const;
};

/// Throws HolderViolation naming the first offending control-point pair.
void check_holder(const GraphCurve& curve, double alpha, double kappa);

/// Every sequence of `n` levels in {0, ..., floor(1/value_step)} whose values
/// level * value_step satisfy |g_i - g_j| <= kappa (|i - j| spacing)^alpha pairwise.
/// Throws CapacityError past `max_sequences`.
std::vector<std::vector<int>> holder_level_sequences(int n, double value_step, double spacing, double alpha,
                                                     double kappa, std::size_t max_sequences);

/// Nodes at Euclidean distance < r from a polyline.
Cluster tube_nodes(const NodeSet& net, const std::vector<std::vector<double>>& polyline, double r);

/// Validates the curve and returns K_{f,r}.
Cluster make_tube(const NodeSet& net, const GraphCurve& curve, const ThinParams& params);

class TubeStream final : public ClusterStream {
 public:
  TubeStream(const NodeSet& net, ThinParams params, double size_cap = kDefaultSizeCap);
  std::optional<Cluster> next() override;
  Metadata describe() const override;
  const GraphCurve& curve() const noexcept { return last_curve_; }
  std::size_t sequences_per_coordinate() const noexcept { return sequences_.size(); }

 private:
  const NodeSet* net_;
  ThinParams params_;
  EmissionFilter filter_;
  std::vector<std::vector<int>> sequences_;  // admissible control levels for one coordinate
  std::vector<std::size_t> odometer_;
  bool exhausted_ = false;
  GraphCurve last_curve_;
};

// ---------------------------------------------------------------------------
// Bands around lattice paths.

enum class PathMode { NondecreasingFromOrigin, SelfAvoiding };

struct BandParams {
  int length = 4;  // number of steps; the path has length + 1 nodes
  int width = 1;   // h: band = B(path, h) ∩ V with open l1 balls
  PathMode mode = PathMode::NondecreasingFromOrigin;
};

/// B(path, h) ∩ V_m on the lattice.
Cluster band_nodes(const NodeSet& net, std::span<const NodeId> path, int width);

/// True iff every step increases exactly one coordinate by one.
bool is_nondecreasing_path(const NodeSet& net, std::span<const NodeId> path);
/// True iff consecutive nodes are lattice neighbors and no node repeats.
bool is_self_avoiding_path(const NodeSet& net, std::span<const NodeId> path);

/// Nondecreasing d = 2 paths with length <= 20 are enumerated exhaustively; otherwise
/// `budget` distinct paths are sampled (uniform step sequences for nondecreasing paths,
/// uniform restarted growth for self-avoiding ones).
class BandStream final : public ClusterStream {
 public:
  BandStream(const NodeSet& net, BandParams params, std::size_t budget, std::uint64_t seed,
             double size_cap = kDefaultSizeCap);
  std::optional<Cluster> next() override;
  Metadata describe() const override;
  std::span<const NodeId> path() const noexcept { return last_path_; }
  bool exhaustive() const noexcept { return exhaustive_; }

  static constexpr int kExhaustiveMaxLength = 20;

 private:
  std::optional<std::vector<NodeId>> next_exhaustive();
  std::optional<std::vector<NodeId>> next_sampled();
  std::optional<std::vector<NodeId>> sample_nondecreasing();
  std::optional<std::vector<NodeId>> sample_self_avoiding();

  const NodeSet* net_;
  BandParams params_;
  std::size_t budget_;
  std::uint64_t seed_;
  EmissionFilter filter_;
  bool exhaustive_ = false;
  std::uint64_t next_code_ = 0;  // exhaustive: step sequence as a bit pattern
  std::size_t sampled_ = 0;
  std::size_t attempts_ = 0;
  std::unordered_set<std::uint64_t> seen_paths_;
  std::vector<NodeId> last_path_;
  Rng rng_;
};

// ---------------------------------------------------------------------------
// Animals (lattice polyominoes).

/// Every connected node set of size 1..k_max, each exactly once, by Redelmeier's
/// method: roots in increasing id order, growth restricted to ids above the root.
class AnimalStream final : public ClusterStream {
 public:
  static constexpr int kMaxSize = 12;

  AnimalStream(const NodeSet& net, int k_max);
  std::optional<Cluster> next() override;
  Metadata describe() const override;

 private:
  struct Frame {
    std::vector<NodeId> untried;
    std::vector<NodeId> marked;
  };
  bool start_root();

  const NodeSet* net_;
  int k_max_;
  std::size_t next_root_ = 0;
  NodeId root_ = 0;
  std::vector<NodeId> cells_;
  std::vector<Frame> frames_;
  std::vector<char> reached_;
};

/// True iff the ids form a connected subgraph of the lattice.
bool is_lattice_connected(const NodeSet& net, std::span<const NodeId> ids);

}  // namespace scanlab
