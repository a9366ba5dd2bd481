#include "scanlab/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <ostream>

#include "scanlab/clusters.hpp"
#include "scanlab/errors.hpp"
#include "scanlab/growth.hpp"
#include "scanlab/metric.hpp"
#include "scanlab/rng.hpp"

namespace scanlab {
namespace {

double rate_of(std::size_t hits, std::size_t n) { return n ? static_cast<double>(hits) / static_cast<double>(n) : 0.0; }

}  // namespace

std::vector<RiskEstimate> sweep(const RiskProblem& problem, const SweepConfig& cfg) {
  if (!problem.statistic || !problem.truth) throw ConfigError("test", "risk problem lacks a statistic or truth class");
  if (problem.truth_count == 0) throw ConfigError("truth", "truth class is empty");
  if (cfg.trials == 0) throw ConfigError("trials", "need at least one trial per point");
  for (std::size_t i = 1; i < cfg.lambdas.size(); ++i)
    if (!(cfg.lambdas[i] > cfg.lambdas[i - 1])) throw ConfigError("lambdas", "Lambda grid must be strictly increasing");

  const auto start = std::chrono::steady_clock::now();
  const std::size_t n0 = cfg.null_trials ? cfg.null_trials : cfg.trials;
  const auto null_stat = [&](const Field& f) { return problem.statistic(f, 0); };

  Calibration cal;
  if (!problem.fixed_threshold)
    cal = calibrate(null_stat, problem.node_count, problem.horizon, problem.model, cfg.alpha, cfg.calibration,
                    cfg.seed, cfg.policy);

  std::vector<double> nulls(n0);
  parallel_for(n0, cfg.policy, [&](std::size_t i) {
    nulls[i] = null_stat(sample_null(problem.node_count, problem.model, problem.horizon,
                                     derive_seed(cfg.seed, kNullTag, i)));
  });

  const std::size_t truths = problem.truth_count, n1 = cfg.trials;
  std::vector<double> alt(truths * n1);
  std::vector<RiskEstimate> out;
  for (double lambda : cfg.lambdas) {
    const double threshold = problem.fixed_threshold ? problem.fixed_threshold(lambda) : cal.threshold;
    parallel_for(truths * n1, cfg.policy, [&](std::size_t i) {
      const std::size_t j = i / n1, trial = i % n1;
      const Field f = sample_null(problem.node_count, problem.model, problem.horizon,
                                  derive_seed(cfg.seed, kAltNoiseTag, j, trial));
      const auto slices = problem.truth(j, trial, derive_seed(cfg.seed, kTruthTag, j, trial));
      SignalSpec sig{lambda, {}};
      alt[i] = problem.statistic(plant(f, slices, sig, problem.model, derive_seed(cfg.seed, kPlantTag, j, trial)), j);
    });

    RiskEstimate e;
    e.lambda = lambda;
    e.theory = cfg.theory.value_or(std::numeric_limits<double>::quiet_NaN());
    e.threshold = threshold;
    e.type1 = rate_of(static_cast<std::size_t>(std::count_if(nulls.begin(), nulls.end(),
                                                             [&](double s) { return s > threshold; })),
                      n0);
    for (std::size_t j = 0; j < truths; ++j) {
      std::size_t misses = 0;
      for (std::size_t t = 0; t < n1; ++t) misses += alt[j * n1 + t] > threshold ? 0 : 1;
      const double miss = rate_of(misses, n1);
      if (j == 0 || miss > e.type2_worst) {
        e.type2_worst = miss;
        e.worst_truth = j;
      }
    }
    e.risk = e.type1 + e.type2_worst;
    e.se = std::sqrt(e.type1 * (1.0 - e.type1) / static_cast<double>(n0) +
                     e.type2_worst * (1.0 - e.type2_worst) / static_cast<double>(n1));
    e.trials = n1;
    e.null_trials = n0;
    e.truths = truths;
    e.seed = cfg.seed;
    out.push_back(e);
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  for (auto& e : out) e.wallclock_ms = ms;
  return out;
}

RiskEstimate estimate_risk(const RiskProblem& problem, SweepConfig cfg, double lambda) {
  cfg.lambdas = {lambda};
  return sweep(problem, cfg).front();
}

// ---------------------------------------------------------------------------

NodeSet build_network(const ExperimentConfig& cfg) {
  if (cfg.d < 1) throw ConfigError("d", "dimension must be positive");
  if (cfg.net == "lattice") return make_lattice(cfg.d, cfg.side);
  if (cfg.net == "grid-cloud") return make_grid_cloud(cfg.d, cfg.side);
  if (cfg.net == "uniform") {
    if (cfg.m == 0) throw ConfigError("m", "uniform cloud needs m >= 1");
    return make_uniform_cloud(cfg.d, cfg.m, cfg.net_seed);
  }
  throw ConfigError("net", "unknown network kind '" + cfg.net + "'");
}

namespace {

inline constexpr std::uint64_t kClassTag = 0xC1A5;

void append(ClusterList& dst, ClusterStream& stream) {
  while (auto c = stream.next()) dst.push_back(*c);
}

PathMode parse_path(const std::string& s) {
  if (s == "nondecreasing") return PathMode::NondecreasingFromOrigin;
  if (s == "self-avoiding") return PathMode::SelfAvoiding;
  throw ConfigError("path", "unknown path mode '" + s + "'");
}

ClusterList scan_class(const ExperimentConfig& cfg, const NodeSet& net) {
  ClusterList list;
  if (cfg.family == "balls") {
    if (cfg.radii.empty()) throw ConfigError("radii", "ball scan needs at least one radius");
    for (double r : cfg.radii) {
      BallStream s(net, r);
      append(list, s);
    }
  } else if (cfg.family == "thick") {
    ThickParams p{cfg.lambda_lo, cfg.lambda_hi, cfg.kappa, kAllShapes, cfg.epsilon > 0 ? cfg.epsilon : 0.25};
    ThickStream s(net, p);
    append(list, s);
  } else if (cfg.family == "bands") {
    BandStream s(net, {cfg.band_length, cfg.band_width, parse_path(cfg.path)}, cfg.band_budget,
                 derive_seed(cfg.sweep.seed, kClassTag));
    append(list, s);
  } else if (cfg.family == "animals") {
    AnimalStream s(net, cfg.kmax);
    append(list, s);
  } else if (cfg.family == "tubes") {
    ThinParams p;
    p.alpha = cfg.tube_alpha;
    p.kappa = cfg.tube_kappa;
    p.radius = cfg.tube_radius;
    p.control_points = cfg.tube_points;
    p.value_step = cfg.tube_step;
    TubeStream s(net, p);
    append(list, s);
  } else {
    throw ConfigError("family", "unknown cluster family '" + cfg.family + "'");
  }
  if (list.empty()) throw ConfigError("family", "scan class is empty");
  return list;
}

std::vector<ScaleNet> multiscale_nets(const ExperimentConfig& cfg, const NodeSet& net) {
  if (cfg.levels.empty()) throw ConfigError("levels", "multiscale test needs at least one level");
  if (!(cfg.scale_step > 0.0)) throw ConfigError("scale-step", "must be positive");
  const double unit = net.mode() == Mode::LatticeL1 ? static_cast<double>(net.side()) : 1.0;
  std::vector<ScaleNet> out;
  for (int level : cfg.levels) {
    const double lo = std::ldexp(1.0, -level);
    ClusterList list;
    for (double r = lo; r < 2.0 * lo; r *= 1.0 + cfg.scale_step) {
      BallStream s(net, cfg.scale_base * r * unit);
      append(list, s);
    }
    ScaleNet sn;
    sn.level = level;
    sn.net = cfg.epsilon > 0 ? build_net(list, cfg.epsilon) : EpsNet{0.0, std::move(list), {}};
    sn.tau = default_tau(level, net.size(), net.dim(), cfg.tau_c);
    out.push_back(std::move(sn));
  }
  return out;
}

/// `count` distinct indices below n, in increasing order; all of them when n < 200.
std::vector<std::size_t> pick(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> idx;
  if (n < 200 || count >= n) {
    for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
    return idx;
  }
  Rng rng(seed);
  std::vector<char> used(n, 0);
  while (idx.size() < count) {
    const auto i = static_cast<std::size_t>(rng.below(n));
    if (!used[i]) {
      used[i] = 1;
      idx.push_back(i);
    }
  }
  std::sort(idx.begin(), idx.end());
  return idx;
}

/// Nodes whose l1 ball of radius `margin` lies inside the lattice (all nodes off-lattice).
std::vector<NodeId> interior_nodes(const NodeSet& net, double margin) {
  std::vector<NodeId> out;
  for (std::size_t id = 0; id < net.size(); ++id) {
    bool inside = true;
    if (net.mode() == Mode::LatticeL1)
      for (double x : net.coord(static_cast<NodeId>(id))) inside = inside && x >= margin && x <= net.side() - 1 - margin;
    if (inside) out.push_back(static_cast<NodeId>(id));
  }
  return out;
}

}  // namespace

RiskProblem build_problem(const ExperimentConfig& cfg, const NodeSet& net) {
  RiskProblem prob;
  prob.node_count = net.size();
  prob.horizon = cfg.horizon;
  if (cfg.horizon < 0) throw ConfigError("horizon", "must be nonnegative");
  prob.model = NoiseModel{parse_family(cfg.model)};
  const auto& sw = cfg.sweep;
  if (sw.trials < 50) throw ConfigError("trials", "need at least 50 trials per point");
  const NodeSet* np = &net;

  // Truth class.
  const std::uint64_t truth_seed = derive_seed(sw.seed, kTruthTag);
  if (cfg.truth == "balls" || cfg.truth == "bands" || cfg.truth == "animals" || cfg.truth == "fixed") {
    std::vector<Cluster> fixed;
    if (cfg.truth == "balls") {
      for (std::size_t i : pick(net.size(), cfg.truths, truth_seed))
        fixed.push_back(ball_nodes(net, net.coord(static_cast<NodeId>(i)), cfg.truth_radius));
    } else if (cfg.truth == "bands") {
      BandStream s(net, {cfg.band_length, cfg.band_width, parse_path(cfg.path)},
                   std::max<std::size_t>(cfg.truths, 1), truth_seed);
      ClusterList all = collect(s, s.exhaustive() ? SIZE_MAX : cfg.truths);
      for (std::size_t i : pick(all.size(), cfg.truths, truth_seed)) fixed.push_back(all.cluster(i));
    } else if (cfg.truth == "animals") {
      AnimalStream s(net, cfg.kmax);
      ClusterList all = collect(s);
      for (std::size_t i : pick(all.size(), cfg.truths, truth_seed)) fixed.push_back(all.cluster(i));
    } else {
      if (cfg.fixed_ids.empty()) throw ConfigError("fixed-ids", "fixed truth needs node ids");
      for (NodeId v : cfg.fixed_ids)
        if (v >= net.size()) throw ConfigError("fixed-ids", "node id out of range");
      fixed.push_back(Cluster::from_ids(cfg.fixed_ids));
    }
    std::erase_if(fixed, [](const Cluster& c) { return c.empty(); });
    if (fixed.empty()) throw ConfigError("truth", "truth class is empty");
    for (const auto& c : fixed)
      if (small_cluster_warning(prob.model, c.size())) {
        std::fprintf(stderr, "warning: truth cluster of size %zu is below the normal-approximation minimum %zu\n",
                     c.size(), kMinClusterSize);
        break;
      }
    auto shared = std::make_shared<std::vector<Cluster>>(std::move(fixed));
    prob.truth_count = shared->size();
    prob.truth = [shared](std::size_t j, std::size_t, std::uint64_t) { return std::vector<Cluster>{(*shared)[j]}; };
    if (cfg.test == "oracle") {
      prob.statistic = [shared, model = prob.model](const Field& f, std::size_t j) {
        return standardized_sum(f, (*shared)[j], model);
      };
      prob.fixed_threshold = [](double lambda) { return lambda / 2.0; };
    }
  } else if (cfg.truth == "richardson" || cfg.truth == "cylinder") {
    if (cfg.horizon < 1) throw ConfigError("horizon", "space-time truths need horizon >= 1");
    if (net.mode() != Mode::LatticeL1 && cfg.truth == "richardson")
      throw ConfigError("net", "Richardson growth needs a lattice");
    const int onset_max = cfg.onset_max >= 0 ? cfg.onset_max : cfg.horizon / 2;
    if (onset_max > cfg.horizon) throw ConfigError("onset-max", "onset beyond the horizon");
    const double margin = cfg.truth == "richardson" ? cfg.limit_radius : cfg.truth_radius;
    const auto candidates = interior_nodes(net, margin);
    if (candidates.empty()) throw ConfigError("limit-radius", "no interior center fits the truth");
    struct Spec {
      NodeId center;
      int onset;
    };
    auto specs = std::make_shared<std::vector<Spec>>();
    Rng rng(truth_seed);
    const std::size_t count = std::max<std::size_t>(cfg.truths, 1);
    for (std::size_t j = 0; j < count; ++j) {
      const NodeId c = candidates[rng.below(candidates.size())];
      const int onset = static_cast<int>(rng.below(static_cast<std::uint64_t>(onset_max) + 1));
      specs->push_back({c, onset});
    }
    prob.truth_count = specs->size();
    const int t_m = cfg.horizon;
    if (cfg.truth == "richardson") {
      if (!(cfg.richardson_p > 0.0 && cfg.richardson_p <= 1.0))
        throw ConfigError("richardson-p", "must lie in (0, 1]");
      prob.truth = [np, specs, t_m, p = cfg.richardson_p, r = cfg.limit_radius](std::size_t j, std::size_t,
                                                                                  std::uint64_t seed) {
        const auto& s = (*specs)[j];
        return richardson_grow(*np, s.center, p, s.onset, t_m, seed, r).slices;
      };
    } else {
      prob.truth = [np, specs, t_m, r = cfg.truth_radius](std::size_t j, std::size_t, std::uint64_t) {
        const auto& s = (*specs)[j];
        return make_cylinder(*np, np->coord(s.center), r, s.onset, t_m).slices;
      };
    }
  } else {
    throw ConfigError("truth", "unknown truth class '" + cfg.truth + "'");
  }

  // Test statistic.
  const NoiseModel model = prob.model;
  if (cfg.test == "oracle") {
    if (!prob.statistic) throw ConfigError("test", "oracle test needs a fixed truth class");
  } else if (cfg.test == "average") {
    prob.statistic = [model](const Field& f, std::size_t) { return average_test(f, model).statistic; };
  } else if (cfg.test == "scan" || cfg.test == "eps-scan" || cfg.test == "cylinder-scan") {
    ClusterList list = scan_class(cfg, net);
    if (cfg.test != "scan" && cfg.epsilon > 0) {
      if (cfg.epsilon > kSqrt2) throw ConfigError("epsilon", "must lie in (0, sqrt(2)]");
      list = build_net(list, cfg.epsilon).members;
    }
    auto members = std::make_shared<ClusterList>(std::move(list));
    if (cfg.test == "cylinder-scan") {
      if (cfg.horizon < 1) throw ConfigError("horizon", "cylinder scan needs horizon >= 1");
      auto windows = std::make_shared<std::vector<int>>(dyadic_windows(cfg.horizon));
      prob.statistic = [members, windows, model](const Field& f, std::size_t) {
        return scan_spacetime_cylinders(f, *members, *windows, model, ExecPolicy::Serial).statistic;
      };
    } else {
      prob.statistic = [members, model](const Field& f, std::size_t) {
        return scan(f, *members, model, ExecPolicy::Serial).statistic;
      };
    }
    prob.describe.emplace_back("scan_clusters", std::to_string(members->size()));
  } else if (cfg.test == "multiscale") {
    auto nets = std::make_shared<std::vector<ScaleNet>>(multiscale_nets(cfg, net));
    std::size_t total = 0;
    for (const auto& s : *nets) total += s.net.members.size();
    prob.statistic = [nets, model](const Field& f, std::size_t) {
      return multiscale_test(f, *nets, model, ExecPolicy::Serial).statistic;
    };
    prob.describe.emplace_back("scan_clusters", std::to_string(total));
  } else {
    throw ConfigError("test", "unknown test '" + cfg.test + "'");
  }
  prob.describe.emplace_back("truths", std::to_string(prob.truth_count));
  return prob;
}

void write_sweep_csv(std::ostream& os, const std::vector<RiskEstimate>& rows) {
  os << "lambda,theory_threshold,type1,type2_worst,risk,se,trials,seed\n";
  char buf[256];
  for (const auto& e : rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%s,%.6f,%.6f,%.6f,%.6f,%zu,%llu\n", e.lambda,
                  std::isnan(e.theory) ? "" : std::to_string(e.theory).c_str(), e.type1, e.type2_worst, e.risk,
                  e.se, e.trials, static_cast<unsigned long long>(e.seed));
    os << buf;
  }
}

void write_test_csv(std::ostream& os, const std::vector<TestResult>& rows) {
  os << "statistic,threshold,decision,argmax_size,wallclock_ms\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%s,%zu,%.3f\n", r.statistic, r.threshold,
                  r.reject ? "reject" : "accept", r.argmax_size, r.wallclock_ms);
    os << buf;
  }
}

}  // namespace scanlab
