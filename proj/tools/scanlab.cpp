// scanlab: command-line front end for the scan-statistic library.
//
// Every subcommand reads options from flags or from a config file section of the same
// name (`scanlab sweep --config exp.cfg` reads `[sweep]`). The resolved configuration is
// echoed to stderr and, when --out names a file, to `<out>.config`.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "scanlab/clusters.hpp"
#include "scanlab/detect.hpp"
#include "scanlab/errors.hpp"
#include "scanlab/growth.hpp"
#include "scanlab/io.hpp"
#include "scanlab/kernels.hpp"
#include "scanlab/metric.hpp"
#include "scanlab/models.hpp"
#include "scanlab/network.hpp"
#include "scanlab/sim.hpp"

using namespace scanlab;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;

struct Common {
  std::string out = "-";
  std::uint64_t seed = 1;
  int threads = 0;
};

/// Output stream for --out: stdout for "-", else a file.
class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("out", "cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  bool to_stdout() const { return !file_; }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

void echo_config(const CLI::App& sub, const Common& common) {
  std::string text = "[" + sub.get_name() + "]\n" + sub.config_to_str(true, false);
  std::cerr << text;
  if (common.out != "-") {
    std::ofstream cfg(common.out + ".config");
    cfg << text;
  }
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "Output path, '-' for standard output");
  sub->add_option("--seed", c.seed, "Master seed");
  sub->add_option("--threads", c.threads, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
}

std::map<std::string, double> parse_pairs(const std::string& text, const std::string& key) {
  std::map<std::string, double> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError(key, "expected name=value pairs, got '" + item + "'");
    try {
      out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError(key, "malformed number in '" + item + "'");
    }
  }
  return out;
}

// --- net ------------------------------------------------------------------

struct NetOpts {
  std::string mode = "lattice";
  std::string layout = "uniform";
  int d = 2;
  int side = 64;
  std::size_t m = 1000;
};

int run_net(const NetOpts& o, const Common& c) {
  const Mode mode = parse_mode(o.mode);
  NodeSet net = mode == Mode::LatticeL1 ? make_lattice(o.d, o.side)
                : o.layout == "grid"    ? make_grid_cloud(o.d, o.side)
                : o.layout == "uniform" ? make_uniform_cloud(o.d, o.m, c.seed)
                                        : throw ConfigError("layout", "unknown layout '" + o.layout + "'");
  Output out(c.out);
  if (out.to_stdout()) {
    out.stream() << '#' << nodeset_sidecar(net) << '\n';
  } else {
    std::ofstream side(c.out + ".json");
    side << nodeset_sidecar(net) << '\n';
  }
  write_nodeset_csv(out.stream(), net);
  return 0;
}

// --- enumerate ------------------------------------------------------------

struct EnumOpts {
  std::string net;
  std::string family = "balls";
  double radius = 1.5;
  double size_cap = kDefaultSizeCap;
  double lambda_lo = 0.1, lambda_hi = 0.1, kappa = 1.0, grid_eps = 0.25;
  unsigned shapes = kAllShapes;
  double tube_r = 0.05, alpha = 1.0, holder_kappa = 1.0, value_step = 0.025, lambda_over_r = 4.0;
  int points = 5;
  int length = 4, width = 1;
  std::string path = "nondecreasing";
  std::size_t budget = 1000;
  int kmax = 4;
  std::size_t limit = 0;
};

std::unique_ptr<ClusterStream> make_stream(const EnumOpts& o, const NodeSet& net, std::uint64_t seed) {
  if (o.family == "balls") return std::make_unique<BallStream>(net, o.radius, o.size_cap);
  if (o.family == "thick")
    return std::make_unique<ThickStream>(net, ThickParams{o.lambda_lo, o.lambda_hi, o.kappa, o.shapes, o.grid_eps},
                                         o.size_cap);
  if (o.family == "tubes") {
    ThinParams p;
    p.alpha = o.alpha;
    p.kappa = o.holder_kappa;
    p.radius = o.tube_r;
    p.control_points = o.points;
    p.value_step = o.value_step;
    p.lambda_over_r_min = o.lambda_over_r;
    return std::make_unique<TubeStream>(net, p, o.size_cap);
  }
  if (o.family == "bands") {
    PathMode mode = o.path == "nondecreasing"   ? PathMode::NondecreasingFromOrigin
                    : o.path == "self-avoiding" ? PathMode::SelfAvoiding
                                                : throw ConfigError("path", "unknown path mode '" + o.path + "'");
    return std::make_unique<BandStream>(net, BandParams{o.length, o.width, mode}, o.budget, seed, o.size_cap);
  }
  if (o.family == "animals") return std::make_unique<AnimalStream>(net, o.kmax);
  throw ConfigError("family", "unknown cluster family '" + o.family + "'");
}

int run_enumerate(const EnumOpts& o, const Common& c) {
  const NodeSet net = read_nodeset(o.net);
  auto stream = make_stream(o, net, c.seed);
  const ClusterList list = collect(*stream, o.limit ? o.limit : SIZE_MAX);
  Metadata meta = stream->describe();
  meta.emplace_back("seed", std::to_string(c.seed));
  meta.emplace_back("count", std::to_string(list.size()));
  Output out(c.out);
  write_cluster_list(out.stream(), meta, list);
  std::cerr << "clusters: " << list.size() << '\n';
  return 0;
}

// --- netbuild -------------------------------------------------------------

struct NetBuildOpts {
  std::string clusters;
  double epsilon = 0.5;
  bool verify = false;
  std::string against;
};

int run_netbuild(const NetBuildOpts& o, const Common& c) {
  const ClusterFile in = read_cluster_list(o.clusters);
  EpsNet net = build_net(in.clusters, o.epsilon, in.meta);
  net.family.emplace_back("epsilon", format_double(o.epsilon));
  net.family.emplace_back("members", std::to_string(net.members.size()));
  Output out(c.out);
  write_cluster_list(out.stream(), net.family, net.members);
  std::cerr << "net members: " << net.members.size() << " of " << in.clusters.size() << '\n';
  if (o.verify || !o.against.empty()) {
    const ClusterFile target = o.against.empty() ? in : read_cluster_list(o.against);
    std::size_t nodes = 0;
    for (std::size_t i = 0; i < target.clusters.size(); ++i)
      for (NodeId v : target.clusters[i]) nodes = std::max<std::size_t>(nodes, v + 1);
    const auto rep = verify_cover(net, target.clusters, nodes);
    std::cerr << "cover: max_min_dist=" << format_double(rep.max_min_dist) << " epsilon=" << format_double(o.epsilon)
              << " worst_index=" << rep.worst_index << " pass=" << (rep.pass ? "true" : "false") << '\n';
  }
  return 0;
}

// --- calibrate / test -----------------------------------------------------

struct TestOpts {
  std::string net;
  std::string clusters;
  std::string field;
  std::string test = "scan";  // scan | cylinder-scan | average | oracle
  std::string model = "gaussian";
  int horizon = 0;
  double alpha = 0.05;
  std::size_t b = 400;
  double threshold = std::numeric_limits<double>::quiet_NaN();
  std::size_t truth = 0;
  double lambda = 0.0;
  std::size_t trials = 1;
};

std::function<TestResult(const Field&)> make_test(const TestOpts& o, const NoiseModel& model,
                                                  std::shared_ptr<ClusterList> list) {
  if (o.test == "average") return [model](const Field& f) { return average_test(f, model); };
  if (!list || list->empty()) throw ConfigError("clusters", "this test needs a cluster list");
  if (o.test == "scan")
    return [list, model](const Field& f) { return scan(f, *list, model); };
  if (o.test == "cylinder-scan")
    return [list, model](const Field& f) {
      const auto w = dyadic_windows(f.horizon());
      return scan_spacetime_cylinders(f, *list, w, model);
    };
  if (o.test == "oracle") {
    if (o.truth >= list->size()) throw ConfigError("truth", "truth index outside the cluster list");
    auto k = std::make_shared<Cluster>(list->cluster(o.truth));
    return [k, model, lambda = o.lambda](const Field& f) { return oracle_test(f, *k, lambda, model); };
  }
  throw ConfigError("test", "unknown test '" + o.test + "'");
}

std::size_t node_count_of(const TestOpts& o) {
  if (o.net.empty()) throw ConfigError("net", "a node-set file is required");
  return read_nodeset(o.net).size();
}

int run_calibrate(const TestOpts& o, const Common& c) {
  const NoiseModel model{parse_family(o.model)};
  auto list = o.clusters.empty() ? nullptr : std::make_shared<ClusterList>(read_cluster_list(o.clusters).clusters);
  const auto test = make_test(o, model, list);
  const auto cal = calibrate([&](const Field& f) { return test(f).statistic; }, node_count_of(o), o.horizon, model,
                             o.alpha, o.b, c.seed);
  Output out(c.out);
  out.stream() << "alpha,samples,threshold,seed\n"
               << format_double(cal.alpha) << ',' << cal.samples << ',' << format_double(cal.threshold) << ','
               << cal.seed << '\n';
  return 0;
}

int run_test(const TestOpts& o, const Common& c) {
  const NoiseModel model{parse_family(o.model)};
  auto list = o.clusters.empty() ? nullptr : std::make_shared<ClusterList>(read_cluster_list(o.clusters).clusters);
  const auto test = make_test(o, model, list);

  double threshold = o.threshold;
  std::size_t m = 0;
  std::vector<Field> fields;
  if (!o.field.empty()) {
    fields.push_back(read_field_csv(o.field));
    m = fields.back().node_count();
  } else {
    m = node_count_of(o);
    for (std::size_t i = 0; i < o.trials; ++i) {
      Field f = sample_null(m, model, o.horizon, derive_seed(c.seed, kAltNoiseTag, 0, i));
      if (o.lambda > 0.0) {
        if (!list || o.truth >= list->size()) throw ConfigError("truth", "planting needs a cluster list and index");
        f = plant(f, list->cluster(o.truth), SignalSpec{o.lambda, {}}, model, derive_seed(c.seed, kPlantTag, 0, i));
      }
      fields.push_back(std::move(f));
    }
  }
  if (std::isnan(threshold) && o.test != "oracle") {
    threshold = calibrate([&](const Field& f) { return test(f).statistic; }, m, fields.front().horizon(), model,
                          o.alpha, o.b, c.seed)
                    .threshold;
  }
  std::vector<TestResult> rows;
  for (const auto& f : fields) {
    TestResult r = test(f);
    if (o.test != "oracle") apply_threshold(r, threshold);
    rows.push_back(r);
  }
  Output out(c.out);
  write_test_csv(out.stream(), rows);
  return 0;
}

// --- grow -----------------------------------------------------------------

struct GrowOpts {
  std::string net;
  std::string kind = "richardson";
  std::vector<double> x0;
  long node = -1;
  double r0 = 1.5, speed = 1.0, p = 1.0, max_radius = -1.0;
  int t0 = 0, t_m = 10;
  std::vector<double> control;
  double alpha = 1.0, kappa = 1.0, radius = 0.05, xi = 1.0, spacing = 1.0;
  int end = -1;
};

int run_grow(const GrowOpts& o, const Common& c) {
  const NodeSet net = read_nodeset(o.net);
  std::vector<double> x0 = o.x0;
  if (o.node >= 0) {
    if (static_cast<std::size_t>(o.node) >= net.size()) throw ConfigError("node", "node id out of range");
    auto p = net.coord(static_cast<NodeId>(o.node));
    x0.assign(p.begin(), p.end());
  }
  ClusterSequence seq;
  if (o.kind == "cylinder" || o.kind == "cone") {
    if (static_cast<int>(x0.size()) != net.dim()) throw ConfigError("x0", "center needs d coordinates (or --node)");
    seq = o.kind == "cylinder" ? make_cylinder(net, x0, o.r0, o.t0, o.t_m) : make_cone(net, x0, o.speed, o.t0, o.t_m);
  } else if (o.kind == "richardson") {
    if (o.node < 0) throw ConfigError("node", "Richardson growth needs a seed node id");
    seq = richardson_grow(net, static_cast<NodeId>(o.node), o.p, o.t0, o.t_m, c.seed,
                          o.max_radius > 0 ? std::optional<double>(o.max_radius) : std::nullopt);
  } else if (o.kind == "holder") {
    const auto d = static_cast<std::size_t>(net.dim());
    if (o.control.empty() || o.control.size() % d != 0)
      throw ConfigError("control", "control values must hold d equal-length rows");
    const std::size_t n = o.control.size() / d;
    std::vector<std::vector<double>> rows(d);
    for (std::size_t a = 0; a < d; ++a) rows[a].assign(o.control.begin() + a * n, o.control.begin() + (a + 1) * n);
    TrajectoryParams p{o.alpha, o.kappa, o.radius, o.xi, o.spacing, o.t0, o.end < 0 ? o.t_m : o.end};
    seq = make_holder_trajectory(net, rows, p, o.t_m);
  } else {
    throw ConfigError("kind", "unknown growth kind '" + o.kind + "'");
  }
  Output out(c.out);
  write_sequence(out.stream(), seq);
  return 0;
}

// --- sweep ----------------------------------------------------------------

struct SweepOpts {
  ExperimentConfig cfg;
  std::vector<double> lambdas{0.0};
  std::vector<int> fixed_ids;
  std::string theory_params;
};

int run_sweep(SweepOpts& o, const Common& c) {
  auto& cfg = o.cfg;
  cfg.sweep.lambdas = o.lambdas;
  cfg.sweep.seed = c.seed;
  for (int v : o.fixed_ids) {
    if (v < 0) throw ConfigError("fixed-ids", "node ids must be nonnegative");
    cfg.fixed_ids.push_back(static_cast<NodeId>(v));
  }
  if (!cfg.theory_formula.empty()) {
    cfg.theory_params = parse_pairs(o.theory_params, "theory-params");
    cfg.sweep.theory = rate(cfg.theory_formula, cfg.theory_params);
  }
  const NodeSet net = build_network(cfg);
  const RiskProblem problem = build_problem(cfg, net);
  for (const auto& [k, v] : problem.describe) std::cerr << k << ": " << v << '\n';
  const auto rows = sweep(problem, cfg.sweep);
  Output out(c.out);
  write_sweep_csv(out.stream(), rows);
  return 0;
}

// --- rates ----------------------------------------------------------------

struct RateOpts {
  std::string formula;
  std::map<std::string, double> values;
};

int run_rates(const RateOpts& o, const Common& c) {
  const double v = rate(o.formula, o.values);
  Output out(c.out);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f\n", v);
  out.stream() << buf;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scanlab: scan statistics for cluster detection in networks"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Config file; options go in a section named after the subcommand");
  app.allow_config_extras(false);
  app.option_defaults()->always_capture_default();
  app.fallthrough();  // inherited by subcommands so --config may follow the subcommand name

  Common common;
  std::function<int()> action;

  NetOpts net_o;
  auto* net = app.add_subcommand("net", "Build a node set and write it as CSV");
  net->add_option("--mode", net_o.mode, "lattice | euclidean");
  net->add_option("--layout", net_o.layout, "Euclidean layout: uniform | grid");
  net->add_option("--d", net_o.d, "Dimension");
  net->add_option("--side", net_o.side, "Lattice side (lattice, grid)");
  net->add_option("--m", net_o.m, "Node count (uniform)");
  add_common(net, common);
  net->callback([&] { action = [&] { return run_net(net_o, common); }; });

  EnumOpts en;
  auto* enu = app.add_subcommand("enumerate", "Enumerate a cluster class into a cluster-list file");
  enu->add_option("--net", en.net, "Node-set CSV")->required();
  enu->add_option("--family", en.family, "balls | thick | tubes | bands | animals");
  enu->add_option("--radius", en.radius, "Ball radius");
  enu->add_option("--size-cap", en.size_cap, "Largest emitted cluster as a fraction of m");
  enu->add_option("--lambda-lo", en.lambda_lo, "Thick: smallest scale");
  enu->add_option("--lambda-hi", en.lambda_hi, "Thick: largest scale");
  enu->add_option("--kappa", en.kappa, "Thick: sandwich constant");
  enu->add_option("--shapes", en.shapes, "Thick: bitmask 1 balls, 2 ellipsoids, 4 boxes");
  enu->add_option("--grid-eps", en.grid_eps, "Thick: center pitch and scale step");
  enu->add_option("--tube-r", en.tube_r, "Tubes: radius");
  enu->add_option("--alpha", en.alpha, "Tubes: Hoelder exponent");
  enu->add_option("--holder-kappa", en.holder_kappa, "Tubes: Hoelder constant");
  enu->add_option("--value-step", en.value_step, "Tubes: control value step");
  enu->add_option("--points", en.points, "Tubes: control points");
  enu->add_option("--lambda-over-r", en.lambda_over_r, "Tubes: minimum 1/r");
  enu->add_option("--length", en.length, "Bands: path length");
  enu->add_option("--width", en.width, "Bands: width h");
  enu->add_option("--path", en.path, "Bands: nondecreasing | self-avoiding");
  enu->add_option("--budget", en.budget, "Bands: sampled path count");
  enu->add_option("--kmax", en.kmax, "Animals: largest size");
  enu->add_option("--limit", en.limit, "Stop after this many clusters (0: all)");
  add_common(enu, common);
  enu->callback([&] { action = [&] { return run_enumerate(en, common); }; });

  NetBuildOpts nb;
  auto* nbc = app.add_subcommand("netbuild", "Greedy epsilon-net of a cluster list");
  nbc->add_option("--clusters", nb.clusters, "Cluster-list file")->required();
  nbc->add_option("--epsilon", nb.epsilon, "Net precision in (0, sqrt 2]");
  nbc->add_flag("--verify", nb.verify, "Check the cover over the input list");
  nbc->add_option("--against", nb.against, "Check the cover over another cluster list");
  add_common(nbc, common);
  nbc->callback([&] { action = [&] { return run_netbuild(nb, common); }; });

  TestOpts to;
  auto add_test_opts = [&](CLI::App* s) {
    s->add_option("--net", to.net, "Node-set CSV");
    s->add_option("--clusters", to.clusters, "Cluster list (scan class or cylinder bases)");
    s->add_option("--test", to.test, "scan | cylinder-scan | average | oracle");
    s->add_option("--model", to.model, "gaussian | bernoulli | poisson");
    s->add_option("--horizon", to.horizon, "Time horizon t_m of generated fields");
    s->add_option("--alpha", to.alpha, "Level");
    s->add_option("--B", to.b, "Null draws for calibration");
    add_common(s, common);
  };
  auto* cal = app.add_subcommand("calibrate", "Monte Carlo threshold of a test statistic");
  add_test_opts(cal);
  cal->callback([&] { action = [&] { return run_calibrate(to, common); }; });
  auto* tst = app.add_subcommand("test", "Run a test on a field file or on generated fields");
  add_test_opts(tst);
  tst->add_option("--field", to.field, "Field CSV (node,t,value); otherwise fields are generated");
  tst->add_option("--threshold", to.threshold, "Fixed threshold (default: calibrate)");
  tst->add_option("--truth", to.truth, "Cluster index planted (and known to the oracle)");
  tst->add_option("--lambda", to.lambda, "Signal strength planted on generated fields");
  tst->add_option("--trials", to.trials, "Generated fields");
  tst->callback([&] { action = [&] { return run_test(to, common); }; });

  GrowOpts go;
  auto* grow = app.add_subcommand("grow", "Generate a cluster sequence");
  grow->add_option("--net", go.net, "Node-set CSV")->required();
  grow->add_option("--kind", go.kind, "cylinder | cone | richardson | holder");
  grow->add_option("--x0", go.x0, "Center coordinates");
  grow->add_option("--node", go.node, "Center node id (overrides --x0)");
  grow->add_option("--r0", go.r0, "Cylinder radius");
  grow->add_option("--speed", go.speed, "Cone speed");
  grow->add_option("--p", go.p, "Richardson infection probability");
  grow->add_option("--max-radius", go.max_radius, "Richardson confinement radius (<= 0: none)");
  grow->add_option("--t0", go.t0, "Onset");
  grow->add_option("--tm", go.t_m, "Horizon t_m");
  grow->add_option("--control", go.control, "Holder: control values, one row of n per axis");
  grow->add_option("--alpha", go.alpha, "Holder exponent");
  grow->add_option("--kappa", go.kappa, "Holder constant");
  grow->add_option("--radius", go.radius, "Holder: ball radius (unit-cube units)");
  grow->add_option("--xi", go.xi, "Holder: time scale");
  grow->add_option("--spacing", go.spacing, "Holder: control spacing in rescaled time");
  grow->add_option("--end", go.end, "Holder: last slice (-1: t_m)");
  add_common(grow, common);
  grow->callback([&] { action = [&] { return run_grow(go, common); }; });

  SweepOpts so;
  auto& ec = so.cfg;
  auto* sw = app.add_subcommand("sweep", "Monte Carlo risk over a Lambda grid");
  sw->add_option("--net", ec.net, "lattice | grid-cloud | uniform");
  sw->add_option("--d", ec.d, "Dimension");
  sw->add_option("--side", ec.side, "Lattice side");
  sw->add_option("--m", ec.m, "Uniform cloud size");
  sw->add_option("--net-seed", ec.net_seed, "Uniform cloud seed");
  sw->add_option("--horizon", ec.horizon, "Time horizon t_m");
  sw->add_option("--model", ec.model, "gaussian | bernoulli | poisson");
  sw->add_option("--test", ec.test, "scan | eps-scan | multiscale | average | oracle | cylinder-scan");
  sw->add_option("--family", ec.family, "Scan class: balls | thick | bands | animals | tubes");
  sw->add_option("--radii", ec.radii, "Ball radii");
  sw->add_option("--epsilon", ec.epsilon, "Net precision (0: full class)");
  sw->add_option("--kappa", ec.kappa, "Thick: sandwich constant");
  sw->add_option("--lambda-lo", ec.lambda_lo, "Thick: smallest scale");
  sw->add_option("--lambda-hi", ec.lambda_hi, "Thick: largest scale");
  sw->add_option("--band-length", ec.band_length, "Bands: path length");
  sw->add_option("--band-width", ec.band_width, "Bands: width");
  sw->add_option("--path", ec.path, "Bands: nondecreasing | self-avoiding");
  sw->add_option("--band-budget", ec.band_budget, "Bands: sampled paths in the scan class");
  sw->add_option("--kmax", ec.kmax, "Animals: largest size");
  sw->add_option("--tube-radius", ec.tube_radius, "Tubes: radius");
  sw->add_option("--tube-alpha", ec.tube_alpha, "Tubes: Hoelder exponent");
  sw->add_option("--tube-kappa", ec.tube_kappa, "Tubes: Hoelder constant");
  sw->add_option("--tube-step", ec.tube_step, "Tubes: control value step");
  sw->add_option("--tube-points", ec.tube_points, "Tubes: control points");
  sw->add_option("--levels", ec.levels, "Multiscale: dyadic levels");
  sw->add_option("--scale-base", ec.scale_base, "Multiscale: radius multiplier");
  sw->add_option("--scale-step", ec.scale_step, "Multiscale: radius ratio step within a level");
  sw->add_option("--tau-c", ec.tau_c, "Multiscale: constant c in tau");
  sw->add_option("--truth", ec.truth, "balls | bands | animals | richardson | cylinder | fixed");
  sw->add_option("--truth-radius", ec.truth_radius, "Ball or cylinder truth radius");
  sw->add_option("--truths", ec.truths, "Sampled truth clusters");
  sw->add_option("--richardson-p", ec.richardson_p, "Richardson infection probability");
  sw->add_option("--limit-radius", ec.limit_radius, "Richardson confinement radius");
  sw->add_option("--onset-max", ec.onset_max, "Latest onset (-1: t_m / 2)");
  sw->add_option("--fixed-ids", so.fixed_ids, "Fixed truth node ids");
  sw->add_option("--lambdas", so.lambdas, "Strictly increasing Lambda grid");
  sw->add_option("--trials", ec.sweep.trials, "H1 draws per truth");
  sw->add_option("--null-trials", ec.sweep.null_trials, "Fresh null draws (0: trials)");
  sw->add_option("--calibration", ec.sweep.calibration, "Null draws B for the threshold");
  sw->add_option("--alpha", ec.sweep.alpha, "Level");
  sw->add_option("--theory", ec.theory_formula, "Rate formula for the theory column");
  sw->add_option("--theory-params", so.theory_params, "name=value pairs for the rate formula");
  add_common(sw, common);
  sw->callback([&] { action = [&] { return run_sweep(so, common); }; });

  RateOpts ro;
  auto* rt = app.add_subcommand("rates", "Evaluate a closed-form detection threshold");
  rt->set_help_flag("--help", "Print this help message and exit");  // frees -h for the band width
  rt->add_option("--formula", ro.formula, "Formula name")->required();
  for (const char* key : {"m", "k", "d", "lambda", "N", "eps", "p", "r", "l", "h"}) {
    rt->add_option_function<double>(std::string("--") + key, [&ro, key](const double& v) { ro.values[key] = v; },
                                    std::string("Parameter ") + key);
  }
  add_common(rt, common);
  rt->callback([&] { action = [&] { return run_rates(ro, common); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "scanlab: config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    for (const auto* sub : app.get_subcommands()) echo_config(*sub, common);
    set_threads(common.threads);
    return action();
  } catch (const ConfigError& e) {
    std::cerr << "scanlab: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CapacityError& e) {
    std::cerr << "scanlab: capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const std::domain_error& e) {
    std::cerr << "scanlab: invalid parameter: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "scanlab: invalid parameter: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "scanlab: " << e.what() << '\n';
    return 1;
  }
}
