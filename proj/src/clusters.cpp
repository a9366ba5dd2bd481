#include "scanlab/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "scanlab/errors.hpp"

namespace scanlab {
namespace {

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

constexpr double kTol = 1e-12;

double domain_extent(const NodeSet& net) {
  return net.mode() == Mode::LatticeL1 ? static_cast<double>(net.side() - 1) : 1.0;
}

}  // namespace

ClusterList collect(ClusterStream& stream, std::size_t limit) {
  ClusterList out;
  for (std::size_t i = 0; i < limit; ++i) {
    auto c = stream.next();
    if (!c) break;
    out.push_back(*c);
  }
  return out;
}

EmissionFilter::EmissionFilter(std::size_t node_count, double size_cap_fraction)
    : max_size_(static_cast<std::size_t>(std::floor(size_cap_fraction * static_cast<double>(node_count)))) {}

bool EmissionFilter::admit(const Cluster& c) {
  if (c.empty() || c.size() > max_size_) return false;
  return seen_.insert(c).second;
}

// ---------------------------------------------------------------------------

BallStream::BallStream(const NodeSet& net, double radius, double size_cap)
    : net_(&net), radius_(radius), filter_(net.size(), size_cap) {
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
}

std::optional<Cluster> BallStream::next() {
  while (next_center_ < net_->size()) {
    const auto center = static_cast<NodeId>(next_center_++);
    Cluster c = ball_nodes(*net_, net_->coord(center), radius_);
    if (filter_.admit(c)) {
      last_center_ = center;
      return c;
    }
  }
  return std::nullopt;
}

Metadata BallStream::describe() const {
  return {{"family", "balls"}, {"lambda", fmt_double(radius_)}};
}

// ---------------------------------------------------------------------------

std::string_view to_string(ShapeKind kind) noexcept {
  switch (kind) {
    case ShapeKind::Ball: return "ball";
    case ShapeKind::Ellipsoid: return "ellipsoid";
    case ShapeKind::Box: return "box";
  }
  return "?";
}

Shape Shape::ball(std::vector<double> center, double radius) {
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  Shape s;
  s.kind = ShapeKind::Ball;
  s.center = std::move(center);
  s.half_axes.assign(s.center.size(), radius);
  s.scale = radius;
  return s;
}

namespace {

Shape stretched(ShapeKind kind, std::vector<double> center, std::vector<double> half_axes,
                double kappa, double scale) {
  if (center.size() != half_axes.size() || center.empty())
    throw DomainError("shape center and half-axes must have the same positive dimension");
  for (double a : half_axes)
    if (!(a > 0.0)) throw DomainError("half-axes must be positive");
  const double inner = *std::min_element(half_axes.begin(), half_axes.end());
  if (scale / inner > kappa * (1.0 + kTol))
    throw DomainError("shape aspect " + fmt_double(scale / inner) + " exceeds kappa " + fmt_double(kappa));
  Shape s;
  s.kind = kind;
  s.center = std::move(center);
  s.half_axes = std::move(half_axes);
  s.scale = scale;
  return s;
}

double lp_norm(const std::vector<double>& v, bool l1) {
  double acc = 0.0;
  for (double x : v) acc += l1 ? std::abs(x) : x * x;
  return l1 ? acc : std::sqrt(acc);
}

}  // namespace

Shape Shape::ellipsoid(std::vector<double> center, std::vector<double> half_axes, double kappa) {
  const double outer = *std::max_element(half_axes.begin(), half_axes.end());
  return stretched(ShapeKind::Ellipsoid, std::move(center), std::move(half_axes), kappa, outer);
}

Shape Shape::box(std::vector<double> center, std::vector<double> half_axes, double kappa) {
  // Box corners are the farthest points; their distance depends on the node set's norm,
  // so the declared scale uses the larger (l1) corner distance. shape_dictionary builds
  // boxes whose scale matches the norm exactly.
  const double outer = lp_norm(half_axes, true);
  return stretched(ShapeKind::Box, std::move(center), std::move(half_axes), kappa, outer);
}

bool Shape::contains(const NodeSet& net, std::span<const double> point) const noexcept {
  const std::size_t d = center.size();
  double y0 = 0.0, y1 = 0.0;
  auto local = [&](std::size_t i) {
    if (d == 2 && rotation != 0.0) return i == 0 ? y0 : y1;
    return point[i] - center[i];
  };
  if (d == 2 && rotation != 0.0) {
    const double dx = point[0] - center[0], dy = point[1] - center[1];
    const double c = std::cos(rotation), s = std::sin(rotation);
    y0 = c * dx + s * dy;
    y1 = -s * dx + c * dy;
  }
  switch (kind) {
    case ShapeKind::Ball:
      return net.distance(point, center) < half_axes[0];
    case ShapeKind::Ellipsoid: {
      double acc = 0.0;
      const bool l1 = net.mode() == Mode::LatticeL1;
      for (std::size_t i = 0; i < d; ++i) {
        const double t = local(i) / half_axes[i];
        acc += l1 ? std::abs(t) : t * t;
      }
      return acc < 1.0;
    }
    case ShapeKind::Box:
      for (std::size_t i = 0; i < d; ++i)
        if (!(std::abs(local(i)) < half_axes[i])) return false;
      return true;
  }
  return false;
}

double Shape::inner_radius() const noexcept {
  return *std::min_element(half_axes.begin(), half_axes.end());
}

Cluster shape_nodes(const NodeSet& net, const Shape& shape) {
  if (static_cast<int>(shape.center.size()) != net.dim()) throw DomainError("shape dimension mismatch");
  std::vector<double> lo(shape.center), hi(shape.center);
  for (std::size_t a = 0; a < lo.size(); ++a) {
    lo[a] -= shape.scale;
    hi[a] += shape.scale;
  }
  std::vector<NodeId> ids;
  net.for_each_in_box(lo, hi, [&](NodeId id) {
    if (shape.contains(net, net.coord(id))) ids.push_back(id);
  });
  return Cluster::from_ids(std::move(ids));
}

std::vector<double> scale_grid(double lambda_lo, double lambda_hi, double epsilon) {
  if (!(lambda_lo > 0.0) || !(lambda_hi >= lambda_lo)) throw DomainError("need 0 < lambda_lo <= lambda_hi");
  if (!(epsilon > 0.0)) throw DomainError("grid precision epsilon must be positive");
  std::vector<double> out;
  for (double l = lambda_lo; l <= lambda_hi * (1.0 + kTol); l *= 1.0 + epsilon) out.push_back(l);
  return out;
}

std::vector<Shape> shape_dictionary(const NodeSet& net, std::span<const double> center,
                                    double lambda, double kappa, unsigned shapes) {
  if (!(kappa >= 1.0)) throw DomainError("kappa must be >= 1");
  const std::vector<double> c(center.begin(), center.end());
  const auto d = c.size();
  const bool l1 = net.mode() == Mode::LatticeL1;
  std::vector<Shape> out;
  if (shapes & kBalls) out.push_back(Shape::ball(c, lambda));
  if (d < 2) return out;

  std::vector<double> aspects;
  if (kappa > 1.0 + kTol) {
    aspects.push_back(std::sqrt(kappa));
    aspects.push_back(kappa);
  }
  if (shapes & kEllipsoids) {
    for (double rho : aspects)
      for (std::size_t axis = 0; axis < d; ++axis) {
        std::vector<double> a(d, lambda / rho);
        a[axis] = lambda;
        Shape s = Shape::ellipsoid(c, a, kappa);
        out.push_back(std::move(s));
      }
  }
  if (shapes & kBoxes) {
    std::vector<double> box_aspects{1.0};
    box_aspects.insert(box_aspects.end(), aspects.begin(), aspects.end());
    for (double rho : box_aspects) {
      const std::size_t orientations = rho == 1.0 ? 1 : d;
      for (std::size_t axis = 0; axis < orientations; ++axis) {
        std::vector<double> u(d, 1.0 / rho);
        u[axis] = 1.0;
        const double norm = lp_norm(u, l1);
        std::vector<double> a(d);
        for (std::size_t i = 0; i < d; ++i) a[i] = lambda * u[i] / norm;
        const double inner = *std::min_element(a.begin(), a.end());
        if (lambda / inner > kappa * (1.0 + kTol)) continue;
        Shape s;
        s.kind = ShapeKind::Box;
        s.center = c;
        s.half_axes = std::move(a);
        s.scale = lambda;
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

ThickStream::ThickStream(const NodeSet& net, ThickParams params, double size_cap)
    : net_(&net), params_(params), filter_(net.size(), size_cap) {
  if (!(params.kappa >= 1.0)) throw DomainError("kappa must be >= 1");
  scales_ = scale_grid(params.lambda_lo, params.lambda_hi, params.epsilon);
}

bool ThickStream::advance() {
  // Refill pending_ with the dictionary at the next center (and next scale when done).
  while (true) {
    if (center_index_ < centers_.size()) {
      pending_ = shape_dictionary(*net_, centers_[center_index_++], scales_[scale_index_ - 1],
                                  params_.kappa, params_.shapes);
      std::reverse(pending_.begin(), pending_.end());
      return true;
    }
    if (scale_index_ >= scales_.size()) return false;
    const double lambda = scales_[scale_index_++];
    const double pitch = lambda * params_.epsilon;
    const double extent = domain_extent(*net_);
    const auto per_axis = static_cast<std::size_t>(std::floor(extent / pitch + kTol)) + 1;
    const auto d = static_cast<std::size_t>(net_->dim());
    centers_.clear();
    center_index_ = 0;
    std::vector<std::size_t> idx(d, 0);
    while (true) {
      std::vector<double> c(d);
      for (std::size_t a = 0; a < d; ++a) c[a] = std::min(extent, static_cast<double>(idx[a]) * pitch);
      centers_.push_back(std::move(c));
      std::size_t a = d;
      while (a > 0 && idx[a - 1] + 1 == per_axis) idx[--a] = 0;
      if (a == 0) break;
      ++idx[a - 1];
    }
  }
}

std::optional<Cluster> ThickStream::next() {
  while (true) {
    if (pending_.empty() && !advance()) return std::nullopt;
    if (pending_.empty()) continue;
    Shape s = std::move(pending_.back());
    pending_.pop_back();
    Cluster c = shape_nodes(*net_, s);
    if (filter_.admit(c)) {
      last_shape_ = std::move(s);
      return c;
    }
  }
}

Metadata ThickStream::describe() const {
  return {{"family", "thick"},
          {"lambda_lo", fmt_double(params_.lambda_lo)},
          {"lambda_hi", fmt_double(params_.lambda_hi)},
          {"kappa", fmt_double(params_.kappa)},
          {"shapes", std::to_string(params_.shapes)},
          {"epsilon", fmt_double(params_.epsilon)}};
}

// ---------------------------------------------------------------------------

std::vector<std::vector<double>> GraphCurve::vertices() const {
  const std::size_t n = control_points();
  std::vector<std::vector<double>> out(n, std::vector<double>(values.size() + 1));
  for (std::size_t i = 0; i < n; ++i) {
    out[i][0] = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < values.size(); ++j) out[i][j + 1] = values[j][i];
  }
  return out;
}

double GraphCurve::length() const {
  const auto v = vertices();
  double total = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    double acc = 0.0;
    for (std::size_t a = 0; a < v[i].size(); ++a) acc += (v[i][a] - v[i - 1][a]) * (v[i][a] - v[i - 1][a]);
    total += std::sqrt(acc);
  }
  return total;
}

void check_holder(const GraphCurve& curve, double alpha, double kappa) {
  const std::size_t n = curve.control_points();
  if (n < 2) throw DomainError("a curve needs at least two control points");
  for (const auto& g : curve.values) {
    if (g.size() != n) throw DomainError("ragged control-point arrays");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double gap = static_cast<double>(j - i) / static_cast<double>(n - 1);
        const double bound = kappa * std::pow(gap, alpha);
        if (std::abs(g[i] - g[j]) > bound + 1e-12)
          throw HolderViolation(i, j, "Hoelder bound violated between control points " +
                                          std::to_string(i) + " and " + std::to_string(j));
      }
  }
}

namespace {

double point_segment_distance(std::span<const double> p, const std::vector<double>& a,
                              const std::vector<double>& b) {
  double ab2 = 0.0, t = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab2 += (b[i] - a[i]) * (b[i] - a[i]);
    t += (p[i] - a[i]) * (b[i] - a[i]);
  }
  t = ab2 > 0.0 ? std::clamp(t / ab2, 0.0, 1.0) : 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double q = a[i] + t * (b[i] - a[i]) - p[i];
    acc += q * q;
  }
  return std::sqrt(acc);
}

}  // namespace

Cluster tube_nodes(const NodeSet& net, const std::vector<std::vector<double>>& polyline, double r) {
  if (net.mode() != Mode::EuclideanL2) throw DomainError("tubes require a Euclidean node set");
  if (!(r > 0.0)) throw DomainError("tube radius must be positive");
  if (polyline.empty()) throw DomainError("empty polyline");
  std::vector<NodeId> ids;
  const std::size_t segments = polyline.size() == 1 ? 1 : polyline.size() - 1;
  for (std::size_t s = 0; s < segments; ++s) {
    const auto& a = polyline[s];
    const auto& b = polyline[std::min(s + 1, polyline.size() - 1)];
    std::vector<double> lo(a.size()), hi(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      lo[i] = std::min(a[i], b[i]) - r;
      hi[i] = std::max(a[i], b[i]) + r;
    }
    net.for_each_in_box(lo, hi, [&](NodeId id) {
      if (point_segment_distance(net.coord(id), a, b) < r) ids.push_back(id);
    });
  }
  return Cluster::from_ids(std::move(ids));
}

std::vector<std::vector<int>> holder_level_sequences(int n, double value_step, double spacing, double alpha,
                                                     double kappa, std::size_t max_sequences) {
  if (n < 1) throw DomainError("need at least one control point");
  if (!(value_step > 0.0)) throw DomainError("control value step must be positive");
  const int levels = static_cast<int>(std::floor(1.0 / value_step + kTol)) + 1;
  std::vector<double> bound(static_cast<std::size_t>(n), 0.0);
  for (int gap = 1; gap < n; ++gap) bound[gap] = kappa * std::pow(gap * spacing, alpha) + 1e-12;

  // Depth-first over levels, checking each new value against every earlier one.
  std::vector<std::vector<int>> out;
  std::vector<int> seq;
  seq.reserve(static_cast<std::size_t>(n));
  auto extend = [&](auto&& self) -> void {
    if (static_cast<int>(seq.size()) == n) {
      if (out.size() == max_sequences)
        throw CapacityError("control grid exceeds max_sequences; coarsen value_step or control_points");
      out.push_back(seq);
      return;
    }
    for (int level = 0; level < levels; ++level) {
      bool ok = true;
      for (std::size_t i = 0; i < seq.size() && ok; ++i)
        ok = std::abs(level - seq[i]) * value_step <= bound[seq.size() - i];
      if (!ok) continue;
      seq.push_back(level);
      self(self);
      seq.pop_back();
    }
  };
  extend(extend);
  return out;
}

namespace {

void validate_thin(const NodeSet& net, const ThinParams& p) {
  if (net.mode() != Mode::EuclideanL2) throw DomainError("tubes require a Euclidean node set");
  if (net.dim() < 2) throw DomainError("tubes require d >= 2");
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw DomainError("Hoelder exponent must lie in (0, 1]");
  if (!(p.kappa >= 0.0)) throw DomainError("Hoelder constant must be nonnegative");
  if (!(p.radius > 0.0)) throw DomainError("tube radius must be positive");
  if (p.radius > 1.0 / p.lambda_over_r_min + kTol)
    throw DomainError("tube radius exceeds 1 / lambda_over_r_min");
  if (p.control_points < 2) throw DomainError("need at least two control points");
}

}  // namespace

Cluster make_tube(const NodeSet& net, const GraphCurve& curve, const ThinParams& params) {
  validate_thin(net, params);
  if (static_cast<int>(curve.values.size()) != net.dim() - 1)
    throw DomainError("curve needs d - 1 coordinate functions");
  for (const auto& g : curve.values)
    for (double v : g)
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError("curve values must lie in [0,1]");
  check_holder(curve, params.alpha, params.kappa);
  return tube_nodes(net, curve.vertices(), params.radius);
}

TubeStream::TubeStream(const NodeSet& net, ThinParams params, double size_cap)
    : net_(&net), params_(params), filter_(net.size(), size_cap) {
  validate_thin(net, params);
  if (!(params.value_step > 0.0) || params.value_step > params.radius / 2.0 + kTol)
    throw DomainError("control value step must lie in (0, radius/2]");
  sequences_ = holder_level_sequences(params.control_points, params.value_step,
                                      1.0 / (params.control_points - 1), params.alpha, params.kappa,
                                      params.max_sequences);
  odometer_.assign(static_cast<std::size_t>(net.dim() - 1), 0);
  exhausted_ = sequences_.empty();
}

std::optional<Cluster> TubeStream::next() {
  while (!exhausted_) {
    GraphCurve curve;
    for (std::size_t j : odometer_) {
      std::vector<double> g;
      for (int level : sequences_[j]) g.push_back(std::min(1.0, level * params_.value_step));
      curve.values.push_back(std::move(g));
    }
    std::size_t a = odometer_.size();
    while (a > 0 && odometer_[a - 1] + 1 == sequences_.size()) odometer_[--a] = 0;
    if (a == 0)
      exhausted_ = true;
    else
      ++odometer_[a - 1];

    Cluster c = tube_nodes(*net_, curve.vertices(), params_.radius);
    if (filter_.admit(c)) {
      last_curve_ = std::move(curve);
      return c;
    }
  }
  return std::nullopt;
}

Metadata TubeStream::describe() const {
  return {{"family", "tubes"},
          {"alpha", fmt_double(params_.alpha)},
          {"kappa", fmt_double(params_.kappa)},
          {"r", fmt_double(params_.radius)},
          {"control_points", std::to_string(params_.control_points)},
          {"value_step", fmt_double(params_.value_step)}};
}

// ---------------------------------------------------------------------------

namespace {

void l1_offsets(int dim, int reach, std::vector<long>& cur, std::vector<std::vector<long>>& out) {
  if (static_cast<int>(cur.size()) == dim) {
    out.push_back(cur);
    return;
  }
  for (long o = -reach; o <= reach; ++o) {
    cur.push_back(o);
    l1_offsets(dim, reach - static_cast<int>(std::abs(o)), cur, out);
    cur.pop_back();
  }
}

std::vector<long> lattice_coords(const NodeSet& net, NodeId id) {
  auto c = net.coord(id);
  std::vector<long> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = static_cast<long>(c[i]);
  return out;
}

}  // namespace

Cluster band_nodes(const NodeSet& net, std::span<const NodeId> path, int width) {
  if (net.mode() != Mode::LatticeL1) throw DomainError("bands require a lattice node set");
  if (width < 1) throw DomainError("band width must be >= 1");
  std::vector<std::vector<long>> offsets;
  std::vector<long> cur;
  l1_offsets(net.dim(), width - 1, cur, offsets);  // open ball: l1 norm < h
  std::vector<NodeId> ids;
  ids.reserve(path.size() * offsets.size());
  std::vector<long> p(static_cast<std::size_t>(net.dim()));
  for (NodeId v : path) {
    const auto base = lattice_coords(net, v);
    for (const auto& o : offsets) {
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = base[i] + o[i];
      if (auto id = net.lattice_id(p)) ids.push_back(*id);
    }
  }
  return Cluster::from_ids(std::move(ids));
}

bool is_nondecreasing_path(const NodeSet& net, std::span<const NodeId> path) {
  for (std::size_t t = 1; t < path.size(); ++t) {
    auto a = net.coord(path[t - 1]), b = net.coord(path[t]);
    int ones = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double step = b[i] - a[i];
      if (step == 1.0)
        ++ones;
      else if (step != 0.0)
        return false;
    }
    if (ones != 1) return false;
  }
  return true;
}

bool is_self_avoiding_path(const NodeSet& net, std::span<const NodeId> path) {
  std::vector<NodeId> sorted(path.begin(), path.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (std::size_t t = 1; t < path.size(); ++t)
    if (net.distance(net.coord(path[t - 1]), net.coord(path[t])) != 1.0) return false;
  return true;
}

BandStream::BandStream(const NodeSet& net, BandParams params, std::size_t budget,
                       std::uint64_t seed, double size_cap)
    : net_(&net), params_(params), budget_(budget), seed_(seed), filter_(net.size(), size_cap),
      rng_(seed) {
  if (net.mode() != Mode::LatticeL1) throw DomainError("bands require a lattice node set");
  if (!(net.side() >= params.length && params.length >= params.width && params.width >= 1))
    throw DomainError("bands need side >= length >= width >= 1");
  exhaustive_ = params.mode == PathMode::NondecreasingFromOrigin && net.dim() == 2 &&
                params.length <= kExhaustiveMaxLength;
}

std::optional<std::vector<NodeId>> BandStream::next_exhaustive() {
  const std::uint64_t total = std::uint64_t{1} << params_.length;
  while (next_code_ < total) {
    const std::uint64_t code = next_code_++;
    std::vector<long> c(2, 0);
    std::vector<NodeId> path{*net_->lattice_id(c)};
    bool inside = true;
    for (int t = params_.length - 1; t >= 0 && inside; --t) {
      ++c[(code >> t) & 1u];
      auto id = net_->lattice_id(c);
      inside = id.has_value();
      if (inside) path.push_back(*id);
    }
    if (inside) return path;
  }
  return std::nullopt;
}

std::optional<std::vector<NodeId>> BandStream::sample_nondecreasing() {
  const auto d = static_cast<std::size_t>(net_->dim());
  std::vector<long> c(d, 0);
  std::vector<NodeId> path{*net_->lattice_id(c)};
  for (int t = 0; t < params_.length; ++t) {
    ++c[rng_.below(d)];
    auto id = net_->lattice_id(c);
    if (!id) return std::nullopt;
    path.push_back(*id);
  }
  return path;
}

std::optional<std::vector<NodeId>> BandStream::sample_self_avoiding() {
  std::vector<NodeId> path{static_cast<NodeId>(rng_.below(net_->size()))};
  std::vector<NodeId> options;
  for (int t = 0; t < params_.length; ++t) {
    options.clear();
    net_->for_each_neighbor(path.back(), [&](NodeId nb) {
      if (std::find(path.begin(), path.end(), nb) == path.end()) options.push_back(nb);
    });
    if (options.empty()) return std::nullopt;
    std::sort(options.begin(), options.end());
    path.push_back(options[rng_.below(options.size())]);
  }
  return path;
}

std::optional<std::vector<NodeId>> BandStream::next_sampled() {
  const std::size_t max_attempts = 100 * budget_ + 1000;
  while (sampled_ < budget_ && attempts_ < max_attempts) {
    ++attempts_;
    auto path = params_.mode == PathMode::NondecreasingFromOrigin ? sample_nondecreasing()
                                                                  : sample_self_avoiding();
    if (!path) continue;
    if (!seen_paths_.insert(cluster_hash(*path)).second) continue;
    return path;
  }
  return std::nullopt;
}

std::optional<Cluster> BandStream::next() {
  while (true) {
    auto path = exhaustive_ ? next_exhaustive() : next_sampled();
    if (!path) return std::nullopt;
    Cluster c = band_nodes(*net_, *path, params_.width);
    if (filter_.admit(c)) {
      if (!exhaustive_) ++sampled_;
      last_path_ = std::move(*path);
      return c;
    }
  }
}

Metadata BandStream::describe() const {
  return {{"family", "bands"},
          {"length", std::to_string(params_.length)},
          {"width", std::to_string(params_.width)},
          {"path", params_.mode == PathMode::NondecreasingFromOrigin ? "nondecreasing" : "self-avoiding"},
          {"sampling", exhaustive_ ? "exhaustive" : "uniform-steps"},
          {"budget", std::to_string(budget_)},
          {"seed", std::to_string(seed_)}};
}

// ---------------------------------------------------------------------------

AnimalStream::AnimalStream(const NodeSet& net, int k_max) : net_(&net), k_max_(k_max) {
  if (net.mode() != Mode::LatticeL1) throw DomainError("animals require a lattice node set");
  if (k_max < 1) throw DomainError("k_max must be positive");
  if (k_max > kMaxSize)
    throw CapacityError("k_max " + std::to_string(k_max) + " exceeds the exhaustive enumeration guard (" +
                        std::to_string(kMaxSize) + "); use sampled mode");
  reached_.assign(net.size(), 0);
}

bool AnimalStream::start_root() {
  if (next_root_ >= net_->size()) return false;
  root_ = static_cast<NodeId>(next_root_++);
  reached_[root_] = 1;
  frames_.push_back(Frame{{root_}, {root_}});
  return true;
}

std::optional<Cluster> AnimalStream::next() {
  while (true) {
    if (frames_.empty() && !start_root()) return std::nullopt;
    Frame& top = frames_.back();
    if (top.untried.empty()) {
      for (NodeId id : top.marked) reached_[id] = 0;
      frames_.pop_back();
      if (!cells_.empty()) cells_.pop_back();
      continue;
    }
    const NodeId cell = top.untried.back();
    top.untried.pop_back();
    cells_.push_back(cell);
    Cluster out = Cluster::from_ids(cells_);
    if (static_cast<int>(cells_.size()) < k_max_) {
      Frame child{top.untried, {}};
      net_->for_each_neighbor(cell, [&](NodeId nb) {
        if (nb > root_ && !reached_[nb]) {
          reached_[nb] = 1;
          child.untried.push_back(nb);
          child.marked.push_back(nb);
        }
      });
      frames_.push_back(std::move(child));
    } else {
      cells_.pop_back();
    }
    return out;
  }
}

Metadata AnimalStream::describe() const {
  return {{"family", "animals"}, {"kmax", std::to_string(k_max_)}};
}

bool is_lattice_connected(const NodeSet& net, std::span<const NodeId> ids) {
  if (ids.empty()) return false;
  std::vector<NodeId> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<char> seen(sorted.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    net.for_each_neighbor(sorted[i], [&](NodeId nb) {
      auto it = std::lower_bound(sorted.begin(), sorted.end(), nb);
      if (it != sorted.end() && *it == nb) {
        const auto j = static_cast<std::size_t>(it - sorted.begin());
        if (!seen[j]) {
          seen[j] = 1;
          ++reached;
          stack.push_back(j);
        }
      }
    });
  }
  return reached == sorted.size();
}

}  // namespace scanlab
