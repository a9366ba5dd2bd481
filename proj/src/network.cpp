#include "scanlab/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scanlab/errors.hpp"
#include "scanlab/rng.hpp"

namespace scanlab {

std::string_view to_string(Mode mode) noexcept {
  return mode == Mode::LatticeL1 ? "lattice-l1" : "euclidean-l2";
}

Mode parse_mode(std::string_view text) {
  if (text == "lattice" || text == "lattice-l1") return Mode::LatticeL1;
  if (text == "euclidean" || text == "euclidean-l2") return Mode::EuclideanL2;
  throw ConfigError("mode", "unknown mode '" + std::string(text) + "'");
}

namespace {

std::size_t checked_power(int side, int dim) {
  std::size_t m = 1;
  for (int i = 0; i < dim; ++i) {
    if (m > std::numeric_limits<NodeId>::max() / static_cast<std::size_t>(side))
      throw CapacityError("node count side^d exceeds the addressable node id range");
    m *= static_cast<std::size_t>(side);
  }
  return m;
}

}  // namespace

NodeSet NodeSet::from_coordinates(int dim, Mode mode, std::vector<double> coords) {
  if (dim < 1) throw DomainError("dimension must be positive");
  if (coords.size() % static_cast<std::size_t>(dim) != 0)
    throw DomainError("coordinate array length is not a multiple of the dimension");
  NodeSet net;
  net.dim_ = dim;
  net.mode_ = mode;
  net.size_ = coords.size() / static_cast<std::size_t>(dim);
  if (net.size_ == 0) throw DomainError("a node set needs at least one node");
  if (net.size_ > std::numeric_limits<NodeId>::max())
    throw CapacityError("too many nodes for 32-bit node ids");
  net.coords_ = std::move(coords);

  if (mode == Mode::LatticeL1) {
    const auto side = static_cast<int>(std::llround(std::pow(static_cast<double>(net.size_), 1.0 / dim)));
    if (checked_power(side, dim) != net.size_)
      throw DomainError("lattice node count is not a perfect d-th power");
    net.side_ = side;
    // Row-major completeness implies uniqueness.
    for (std::size_t id = 0; id < net.size_; ++id) {
      std::size_t rest = id;
      for (int a = dim - 1; a >= 0; --a) {
        const double expect = static_cast<double>(rest % static_cast<std::size_t>(side));
        rest /= static_cast<std::size_t>(side);
        if (net.coords_[id * dim + a] != expect)
          throw DomainError("lattice coordinates are not in row-major order at node " + std::to_string(id));
      }
    }
    return net;
  }

  for (double x : net.coords_)
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("Euclidean coordinates must lie in [0,1]^d");
  std::vector<NodeId> order(net.size_);
  std::iota(order.begin(), order.end(), NodeId{0});
  auto key = [&](NodeId i) { return std::span<const double>(net.coords_.data() + std::size_t{i} * dim, dim); };
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    auto ka = key(a), kb = key(b);
    return std::lexicographical_compare(ka.begin(), ka.end(), kb.begin(), kb.end());
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    auto ka = key(order[i - 1]), kb = key(order[i]);
    if (std::equal(ka.begin(), ka.end(), kb.begin()))
      throw DomainError("duplicate node coordinates");
  }
  net.build_buckets();
  return net;
}

void NodeSet::build_buckets() {
  // About one node per cell, capped to keep the grid small in high dimension.
  const double per_axis = std::floor(std::pow(static_cast<double>(size_), 1.0 / dim_));
  cells_per_axis_ = std::max(1, static_cast<int>(std::min(per_axis, std::pow(1.0e6, 1.0 / dim_))));
  std::size_t cells = 1;
  for (int a = 0; a < dim_; ++a) cells *= static_cast<std::size_t>(cells_per_axis_);
  std::vector<std::size_t> cell_of(size_);
  bucket_start_.assign(cells + 1, 0);
  for (std::size_t id = 0; id < size_; ++id) {
    std::size_t index = 0;
    for (int a = 0; a < dim_; ++a) {
      auto c = static_cast<long>(std::floor(coords_[id * dim_ + a] * cells_per_axis_));
      c = std::clamp(c, 0L, static_cast<long>(cells_per_axis_ - 1));
      index = index * static_cast<std::size_t>(cells_per_axis_) + static_cast<std::size_t>(c);
    }
    cell_of[id] = index;
    ++bucket_start_[index + 1];
  }
  std::partial_sum(bucket_start_.begin(), bucket_start_.end(), bucket_start_.begin());
  bucket_ids_.resize(size_);
  std::vector<std::size_t> fill(bucket_start_.begin(), bucket_start_.end() - 1);
  for (std::size_t id = 0; id < size_; ++id) bucket_ids_[fill[cell_of[id]]++] = static_cast<NodeId>(id);
}

double NodeSet::distance(std::span<const double> a, std::span<const double> b) const noexcept {
  double acc = 0.0;
  if (mode_ == Mode::LatticeL1) {
    for (int i = 0; i < dim_; ++i) acc += std::abs(a[i] - b[i]);
    return acc;
  }
  for (int i = 0; i < dim_; ++i) {
    const double t = a[i] - b[i];
    acc += t * t;
  }
  return std::sqrt(acc);
}

std::optional<NodeId> NodeSet::lattice_id(std::span<const long> c) const noexcept {
  if (mode_ != Mode::LatticeL1 || static_cast<int>(c.size()) != dim_) return std::nullopt;
  std::size_t id = 0;
  for (int a = 0; a < dim_; ++a) {
    if (c[a] < 0 || c[a] >= side_) return std::nullopt;
    id = id * static_cast<std::size_t>(side_) + static_cast<std::size_t>(c[a]);
  }
  return static_cast<NodeId>(id);
}

NodeSet make_lattice(int dim, int side) {
  if (dim < 1) throw DomainError("lattice dimension must be at least 1");
  if (side < 2) throw DomainError("lattice side must be at least 2");
  const std::size_t m = checked_power(side, dim);
  std::vector<double> coords(m * static_cast<std::size_t>(dim));
  for (std::size_t id = 0; id < m; ++id) {
    std::size_t rest = id;
    for (int a = dim - 1; a >= 0; --a) {
      coords[id * dim + a] = static_cast<double>(rest % static_cast<std::size_t>(side));
      rest /= static_cast<std::size_t>(side);
    }
  }
  return NodeSet::from_coordinates(dim, Mode::LatticeL1, std::move(coords));
}

NodeSet make_uniform_cloud(int dim, std::size_t m, std::uint64_t seed) {
  if (dim < 1) throw DomainError("dimension must be positive");
  if (m == 0) throw DomainError("a uniform cloud needs m >= 1");
  if (m > std::numeric_limits<NodeId>::max()) throw CapacityError("too many nodes for 32-bit node ids");
  Rng rng(seed);
  std::vector<double> coords(m * static_cast<std::size_t>(dim));
  for (double& x : coords) x = rng.uniform();
  return NodeSet::from_coordinates(dim, Mode::EuclideanL2, std::move(coords));
}

NodeSet make_grid_cloud(int dim, int side) {
  NodeSet lattice = make_lattice(dim, side);
  std::vector<double> coords(lattice.coordinates().begin(), lattice.coordinates().end());
  for (double& x : coords) x = (x + 0.5) / side;
  return NodeSet::from_coordinates(dim, Mode::EuclideanL2, std::move(coords));
}

namespace {

Cluster nodes_within(const NodeSet& net, std::span<const double> center, double r, bool closed) {
  if (!(r >= 0.0)) throw DomainError("ball radius must be nonnegative");
  if (static_cast<int>(center.size()) != net.dim()) throw DomainError("center dimension mismatch");
  std::vector<double> lo(center.begin(), center.end()), hi(center.begin(), center.end());
  for (int a = 0; a < net.dim(); ++a) {
    lo[a] -= r;
    hi[a] += r;
  }
  std::vector<NodeId> ids;
  net.for_each_in_box(lo, hi, [&](NodeId id) {
    const double dist = net.distance(net.coord(id), center);
    if (closed ? dist <= r : dist < r) ids.push_back(id);
  });
  // Lattice traversal is already row-major sorted; bucket traversal is not.
  if (net.mode() == Mode::LatticeL1) return Cluster::from_sorted(std::move(ids));
  return Cluster::from_ids(std::move(ids));
}

}  // namespace

Cluster ball_nodes(const NodeSet& net, std::span<const double> center, double r) {
  if (!(r > 0.0)) throw DomainError("open ball radius must be positive");
  return nodes_within(net, center, r, false);
}

Cluster closed_ball_nodes(const NodeSet& net, std::span<const double> center, double r) {
  return nodes_within(net, center, r, true);
}

SpreadProbe spread_probe(const NodeSet& net, double constant, NodeId center, double r) {
  SpreadProbe probe;
  probe.center = center;
  probe.radius = r;
  const double scale = net.mode() == Mode::LatticeL1 ? static_cast<double>(net.side()) : 1.0;
  probe.count = ball_nodes(net, net.coord(center), r * scale).size();
  const double volume = static_cast<double>(net.size()) * std::pow(r, net.dim());
  probe.lower = volume / constant;
  probe.upper = volume * constant;
  const auto count = static_cast<double>(probe.count);
  probe.ok = probe.lower <= count && count <= probe.upper;
  return probe;
}

SpreadCertificate check_spread(const NodeSet& net, double constant, double r_star,
                               std::size_t probes, std::uint64_t seed) {
  if (!(constant >= 1.0)) throw DomainError("spread constant C must be >= 1");
  if (!(r_star > 0.0 && r_star <= 1.0)) throw DomainError("r_star must lie in (0, 1]");
  SpreadCertificate cert;
  cert.constant = constant;
  cert.r_star = r_star;
  cert.seed = seed;
  cert.probes.reserve(probes);
  Rng rng(seed);
  const double log_lo = std::log(r_star);
  for (std::size_t i = 0; i < probes; ++i) {
    const auto center = static_cast<NodeId>(rng.below(net.size()));
    const double r = std::exp(log_lo + (0.0 - log_lo) * rng.uniform());
    cert.probes.push_back(spread_probe(net, constant, center, r));
    if (!cert.probes.back().ok && !cert.first_violation) cert.first_violation = i;
  }
  cert.pass = !cert.first_violation.has_value();
  return cert;
}

}  // namespace scanlab
