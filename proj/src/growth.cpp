#include "scanlab/growth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "scanlab/errors.hpp"
#include "scanlab/metric.hpp"
#include "scanlab/rng.hpp"

namespace scanlab {

std::optional<int> ClusterSequence::onset() const noexcept {
  for (std::size_t t = 0; t < slices.size(); ++t)
    if (!slices[t].empty()) return static_cast<int>(t);
  return std::nullopt;
}

std::optional<int> ClusterSequence::last() const noexcept {
  for (std::size_t t = slices.size(); t-- > 0;)
    if (!slices[t].empty()) return static_cast<int>(t);
  return std::nullopt;
}

std::size_t ClusterSequence::total_pairs() const noexcept {
  std::size_t n = 0;
  for (const auto& s : slices) n += s.size();
  return n;
}

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

std::string point(std::span<const double> x) {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + num(x[i]);
  return s;
}

void check_times(int t0, int t_m) {
  if (t_m < 0) throw DomainError("time horizon must be nonnegative");
  if (t0 < 0 || t0 > t_m) throw DomainError("onset must lie in [0, t_m]");
}

}  // namespace

ClusterSequence make_cylinder(const NodeSet& net, std::span<const double> x0, double r0, int t0, int t_m) {
  check_times(t0, t_m);
  if (!(r0 > 0.0)) throw DomainError("cylinder radius must be positive");
  Cluster base = ball_nodes(net, x0, r0);
  if (base.empty()) throw DomainError("cylinder base ball holds no node; onset undefined");
  ClusterSequence seq;
  seq.slices.resize(static_cast<std::size_t>(t_m) + 1);
  for (int t = t0; t <= t_m; ++t) seq.slices[t] = base;
  seq.meta = {{"kind", "cylinder"}, {"x0", point(x0)}, {"r0", num(r0)}, {"t0", std::to_string(t0)},
              {"t_m", std::to_string(t_m)}};
  return seq;
}

ClusterSequence make_cone(const NodeSet& net, std::span<const double> x0, double speed, int t0, int t_m) {
  check_times(t0, t_m);
  if (!(speed > 0.0)) throw DomainError("cone speed must be positive");
  ClusterSequence seq;
  seq.slices.resize(static_cast<std::size_t>(t_m) + 1);
  for (int t = t0; t <= t_m; ++t) seq.slices[t] = closed_ball_nodes(net, x0, speed * (t - t0));
  seq.meta = {{"kind", "cone"}, {"x0", point(x0)}, {"speed", num(speed)}, {"t0", std::to_string(t0)},
              {"t_m", std::to_string(t_m)}};
  return seq;
}

ClusterSequence make_holder_trajectory(const NodeSet& net, const std::vector<std::vector<double>>& control,
                                       const TrajectoryParams& p, int t_m) {
  check_times(p.onset, t_m);
  if (p.end < p.onset || p.end > t_m) throw DomainError("trajectory end must lie in [onset, t_m]");
  if (static_cast<int>(control.size()) != net.dim()) throw DomainError("trajectory needs one control row per axis");
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw DomainError("Hoelder exponent must lie in (0, 1]");
  if (!(p.kappa >= 0.0) || !(p.radius > 0.0) || !(p.xi > 0.0) || !(p.control_spacing > 0.0))
    throw DomainError("trajectory needs kappa >= 0 and positive radius, xi and spacing");
  const std::size_t n = control.front().size();
  if (n == 0) throw DomainError("trajectory needs at least one control point");
  for (const auto& g : control) {
    if (g.size() != n) throw DomainError("ragged trajectory control rows");
    for (double v : g)
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError("trajectory control values must lie in [0,1]");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double bound = p.kappa * std::pow(static_cast<double>(j - i) * p.control_spacing, p.alpha);
        if (std::abs(g[i] - g[j]) > bound + 1e-12)
          throw HolderViolation(i, j, "Hoelder bound violated between control points " + std::to_string(i) +
                                          " and " + std::to_string(j));
      }
  }

  const double scale = net.mode() == Mode::LatticeL1 ? static_cast<double>(net.side() - 1) : 1.0;
  ClusterSequence seq;
  seq.slices.resize(static_cast<std::size_t>(t_m) + 1);
  std::vector<double> center(control.size());
  for (int t = p.onset; t <= p.end; ++t) {
    const double s = (t - p.onset) / p.xi / p.control_spacing;
    const auto i = std::min(static_cast<std::size_t>(s), n - 1);
    const double frac = i + 1 < n ? s - static_cast<double>(i) : 0.0;
    for (std::size_t a = 0; a < control.size(); ++a) {
      const double g = i + 1 < n ? control[a][i] + frac * (control[a][i + 1] - control[a][i]) : control[a][i];
      center[a] = g * scale;
    }
    seq.slices[t] = ball_nodes(net, center, p.radius * scale);
  }
  seq.meta = {{"kind", "holder-trajectory"}, {"alpha", num(p.alpha)}, {"kappa", num(p.kappa)},
              {"r", num(p.radius)},          {"xi", num(p.xi)},       {"onset", std::to_string(p.onset)},
              {"end", std::to_string(p.end)}, {"t_m", std::to_string(t_m)}};
  return seq;
}

ClusterSequence richardson_grow(const NodeSet& net, NodeId x0, double p, int t0, int t_m, std::uint64_t seed,
                                std::optional<double> max_radius) {
  if (net.mode() != Mode::LatticeL1) throw DomainError("Richardson growth runs on a lattice");
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("infection probability must lie in (0, 1]");
  if (x0 >= net.size()) throw DomainError("seed node outside the lattice");
  check_times(t0, t_m);
  const auto origin = net.coord(x0);
  auto allowed = [&](NodeId v) { return !max_radius || net.distance(net.coord(v), origin) <= *max_radius; };

  ClusterSequence seq;
  seq.slices.resize(static_cast<std::size_t>(t_m) + 1);
  std::vector<char> occupied(net.size(), 0);
  std::vector<std::uint32_t> stamp(net.size(), 0);
  std::vector<NodeId> cells{x0}, frontier;
  occupied[x0] = 1;
  Rng rng(seed);
  seq.slices[t0] = Cluster::from_sorted({x0});
  for (int t = t0 + 1; t <= t_m; ++t) {
    frontier.clear();
    for (NodeId v : cells)
      net.for_each_neighbor(v, [&](NodeId nb) {
        if (!occupied[nb] && stamp[nb] != static_cast<std::uint32_t>(t) && allowed(nb)) {
          stamp[nb] = static_cast<std::uint32_t>(t);
          frontier.push_back(nb);
        }
      });
    std::sort(frontier.begin(), frontier.end());
    for (NodeId nb : frontier)
      if (p >= 1.0 || rng.uniform() < p) {
        occupied[nb] = 1;
        cells.push_back(nb);
      }
    std::vector<NodeId> sorted(cells);
    std::sort(sorted.begin(), sorted.end());
    seq.slices[t] = Cluster::from_sorted(std::move(sorted));
  }
  seq.meta = {{"kind", "richardson"}, {"x0", std::to_string(x0)}, {"p", num(p)}, {"t0", std::to_string(t0)},
              {"t_m", std::to_string(t_m)}, {"seed", std::to_string(seed)}};
  if (max_radius) seq.meta.emplace_back("max_radius", num(*max_radius));
  return seq;
}

LimitShapeReport verify_limit_shape(const ClusterSequence& seq, const Cluster& limit,
                                    const std::function<double(int)>& nu) {
  if (limit.empty()) throw DomainError("limit shape must be nonempty");
  LimitShapeReport report;
  report.report_only = !nu;
  const auto onset = seq.onset();
  if (!onset) return report;
  for (std::size_t t = 0; t < seq.slices.size(); ++t) {
    if (seq.slices[t].empty()) continue;
    LimitShapeRow row;
    row.t = static_cast<int>(t);
    row.delta = delta(seq.slices[t], limit);
    if (nu) {
      row.bound = nu(row.t - *onset);
      row.ok = row.delta <= row.bound;
      report.pass = report.pass && row.ok;
    }
    report.rows.push_back(row);
  }
  return report;
}

VariationReport verify_bounded_variation(const ClusterSequence& seq, double eta, double xi) {
  if (!(eta >= 0.0 && eta <= kSqrt2 + 1e-12)) throw DomainError("eta must lie in [0, sqrt(2)]");
  VariationReport r;
  r.eta = eta;
  const int n = static_cast<int>(seq.slices.size());
  for (int t = 0; t < n; ++t) {
    if (seq.slices[t].empty()) continue;
    for (int s = t + 1; s < n && s - t <= xi; ++s) {
      if (seq.slices[s].empty()) continue;
      ++r.pairs;
      const double d = delta(seq.slices[t], seq.slices[s]);
      if (r.worst_t < 0 || d > r.worst_delta) {
        r.worst_delta = d;
        r.worst_t = t;
        r.worst_s = s;
      }
    }
  }
  r.pass = r.worst_delta <= eta;
  return r;
}

std::vector<int> dyadic_windows(int t_m) {
  if (t_m < 0) throw DomainError("time horizon must be nonnegative");
  std::vector<int> w;
  for (int x = 1; x < t_m + 1; x *= 2) w.push_back(x);
  w.push_back(t_m + 1);
  return w;
}

TestResult scan_spacetime_cylinders(const Field& field, const ClusterList& bases, std::span<const int> windows,
                                    const NoiseModel& model, ExecPolicy policy) {
  if (bases.empty() || windows.empty()) throw DomainError("space-time scan needs bases and windows");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t m = field.node_count();
  const int t_m = field.horizon();
  for (int w : windows)
    if (w < 1 || w > t_m + 1) throw DomainError("time window outside [1, t_m + 1]");

  // sums[k][v] = sum of X_v(t) over t in [t_m - w_k + 1, t_m].
  std::vector<std::vector<double>> sums(windows.size(), std::vector<double>(m, 0.0));
  std::vector<double> running(m, 0.0);
  int filled = 0;
  std::vector<std::size_t> order(windows.size());
  for (std::size_t k = 0; k < windows.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return windows[a] < windows[b]; });
  for (std::size_t k : order) {
    while (filled < windows[k]) {
      const auto slice = field.slice(t_m - filled);
      for (std::size_t v = 0; v < m; ++v) running[v] += slice[v];
      ++filled;
    }
    sums[k] = running;
  }

  const std::size_t nw = windows.size();
  const double mean0 = model.null_mean(), sigma = model.sigma();
  const auto best = argmax(bases.size() * nw, policy, [] { return 0; }, [&](int, std::size_t i) {
    const std::size_t b = i / nw, k = i % nw;
    const auto ids = bases[b];
    const double* x = sums[k].data();
    double s = 0.0;
    for (NodeId v : ids) s += x[v];
    const double pairs = static_cast<double>(ids.size()) * windows[k];
    return (s - pairs * mean0) / (sigma * std::sqrt(pairs));
  });
  TestResult r;
  r.statistic = best.value;
  r.argmax = best.index;
  r.argmax_size = bases[best.index / nw].size() * static_cast<std::size_t>(windows[best.index % nw]);
  r.wallclock_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

double sequence_sum(const Field& field, const ClusterSequence& seq, const NoiseModel& model) {
  if (static_cast<int>(seq.slices.size()) > field.horizon() + 1)
    throw DomainError("cluster sequence is longer than the field horizon");
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 0; t < seq.slices.size(); ++t) {
    const auto x = field.slice(static_cast<int>(t));
    for (NodeId v : seq.slices[t]) s += x[v];
    n += seq.slices[t].size();
  }
  if (n == 0) throw DomainError("standardized sum over an empty cluster sequence");
  const auto k = static_cast<double>(n);
  return (s - k * model.null_mean()) / (model.sigma() * std::sqrt(k));
}

TestResult scan_sequences(const Field& field, std::span<const ClusterSequence> sequences, const NoiseModel& model,
                          ExecPolicy policy) {
  if (sequences.empty()) throw DomainError("scan over an empty sequence list");
  const auto best = argmax(sequences.size(), policy, [] { return 0; },
                           [&](int, std::size_t i) { return sequence_sum(field, sequences[i], model); });
  TestResult r;
  r.statistic = best.value;
  r.argmax = best.index;
  r.argmax_size = sequences[best.index].total_pairs();
  return r;
}

std::vector<ClusterSequence> trajectory_family(const NodeSet& net, const TrajectoryParams& params, int t_m,
                                               double value_step, double eta, double xi_check,
                                               std::size_t max_sequences) {
  check_times(params.onset, t_m);
  const double span_s = (params.end - params.onset) / (params.xi * params.control_spacing);
  const int n = 1 + static_cast<int>(std::ceil(span_s - 1e-12));
  const auto levels = holder_level_sequences(n, value_step, params.control_spacing, params.alpha, params.kappa,
                                             max_sequences);
  const auto d = static_cast<std::size_t>(net.dim());
  std::vector<std::size_t> odo(d, 0);
  std::vector<ClusterSequence> out;
  while (true) {
    std::vector<std::vector<double>> control(d);
    for (std::size_t a = 0; a < d; ++a)
      for (int level : levels[odo[a]]) control[a].push_back(std::min(1.0, level * value_step));
    ClusterSequence seq = make_holder_trajectory(net, control, params, t_m);
    if (seq.total_pairs() > 0 && verify_bounded_variation(seq, eta, xi_check).pass) {
      if (out.size() == max_sequences) throw CapacityError("trajectory family exceeds max_sequences");
      out.push_back(std::move(seq));
    }
    std::size_t a = d;
    while (a > 0 && odo[a - 1] + 1 == levels.size()) odo[--a] = 0;
    if (a == 0) break;
    ++odo[a - 1];
  }
  return out;
}

}  // namespace scanlab
