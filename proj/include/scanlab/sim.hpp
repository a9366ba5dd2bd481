#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scanlab/cluster.hpp"
#include "scanlab/detect.hpp"
#include "scanlab/kernels.hpp"
#include "scanlab/models.hpp"
#include "scanlab/network.hpp"

namespace scanlab {

/// Everything a Monte Carlo risk estimate needs, independent of how it was configured.
struct RiskProblem {
  std::size_t node_count = 0;
  int horizon = 0;
  NoiseModel model;
  /// Test statistic. `truth` is the index of the planted cluster (0 on null trials); only
  /// the oracle test looks at it.
  std::function<double(const Field&, std::size_t truth)> statistic;
  std::size_t truth_count = 0;
  /// Slices of truth `truth` on H1 trial `trial`; `seed` drives random truths (growth).
  std::function<std::vector<Cluster>(std::size_t truth, std::size_t trial, std::uint64_t seed)> truth;
  /// Bypasses calibration: threshold(Lambda) used as is (oracle test).
  std::function<double(double lambda)> fixed_threshold;
  Metadata describe;
};

struct SweepConfig {
  std::vector<double> lambdas{0.0};
  std::size_t trials = 200;       // H1 draws per truth
  std::size_t null_trials = 0;    // fresh null draws for type I; 0 means `trials`
  std::size_t calibration = 400;  // B
  double alpha = 0.05;
  std::uint64_t seed = 1;
  std::optional<double> theory;   // marked theory column
  ExecPolicy policy = ExecPolicy::Parallel;
};

struct RiskEstimate {
  double lambda = 0.0;
  double theory = 0.0;  // NaN when not set
  double threshold = 0.0;
  double type1 = 0.0;
  double type2_worst = 0.0;
  std::size_t worst_truth = 0;
  double risk = 0.0;
  double se = 0.0;  // sqrt(p1(1-p1)/n0 + p2(1-p2)/n1)
  std::size_t trials = 0;
  std::size_t null_trials = 0;
  std::size_t truths = 0;
  std::uint64_t seed = 0;
  double wallclock_ms = 0.0;
};

/// Seed tags for the independent streams of one experiment.
inline constexpr std::uint64_t kNullTag = 0x4E55;
inline constexpr std::uint64_t kAltNoiseTag = 0xA17;
inline constexpr std::uint64_t kPlantTag = 0x91A;
inline constexpr std::uint64_t kTruthTag = 0x7247;

/// One calibration shared by every grid point, then type I on fresh nulls and the
/// worst per-truth miss rate at each Lambda. H1 noise is reused across Lambda.
std::vector<RiskEstimate> sweep(const RiskProblem& problem, const SweepConfig& cfg);
RiskEstimate estimate_risk(const RiskProblem& problem, SweepConfig cfg, double lambda);

/// Declarative experiment description, as read from a config file.
struct ExperimentConfig {
  // Network.
  std::string net = "lattice";  // lattice | grid-cloud | uniform
  int d = 2;
  int side = 64;
  std::size_t m = 0;  // uniform cloud size
  std::uint64_t net_seed = 1;
  int horizon = 0;

  std::string model = "gaussian";
  std::string test = "eps-scan";  // scan | eps-scan | multiscale | average | oracle | cylinder-scan

  // Scan class (coordinates in the node set's own units).
  std::string family = "balls";  // balls | thick | bands | animals | tubes
  std::vector<double> radii{1.5};
  double epsilon = 0.5;  // net precision; 0 scans the full stream
  double kappa = 1.0;
  double lambda_lo = 0.1, lambda_hi = 0.1;
  int band_length = 8, band_width = 1;
  std::string path = "nondecreasing";
  std::size_t band_budget = 2000;
  int kmax = 4;
  double tube_radius = 0.05, tube_alpha = 1.0, tube_kappa = 1.0, tube_step = 0.025;
  int tube_points = 5;

  // Multiscale: radii scale_base * 2^-l * (1 + scale_step)^j below 2^-l+1 for each level.
  std::vector<int> levels{3, 4, 5, 6};
  double scale_base = 1.0;
  double scale_step = 0.25;
  double tau_c = 1.0;

  // Truth class.
  std::string truth = "balls";  // balls | bands | animals | richardson | cylinder | fixed
  double truth_radius = 1.5;
  std::size_t truths = 20;
  double richardson_p = 1.0;
  double limit_radius = 6.0;
  int onset_max = -1;  // -1: t_m / 2
  std::vector<NodeId> fixed_ids;

  SweepConfig sweep;
  std::string theory_formula;  // rate name, empty for none
  std::map<std::string, double> theory_params;
};

/// Builds the node set of an experiment.
NodeSet build_network(const ExperimentConfig& cfg);

/// Builds the risk problem. Throws ConfigError naming the key for inconsistent settings.
RiskProblem build_problem(const ExperimentConfig& cfg, const NodeSet& net);

/// `lambda,theory_threshold,type1,type2_worst,risk,se,trials,seed`
void write_sweep_csv(std::ostream& os, const std::vector<RiskEstimate>& rows);

/// `statistic,threshold,decision,argmax_size,wallclock_ms`
void write_test_csv(std::ostream& os, const std::vector<TestResult>& rows);

}  // namespace scanlab
