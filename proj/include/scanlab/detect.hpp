#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scanlab/cluster.hpp"
#include "scanlab/kernels.hpp"
#include "scanlab/metric.hpp"
#include "scanlab/models.hpp"

namespace scanlab {

struct ScaleDetail {
  int level = 0;
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t argmax = 0;
  bool reject = false;
};

struct TestResult {
  double statistic = 0.0;
  /// +inf until a threshold is applied.
  double threshold = std::numeric_limits<double>::infinity();
  bool reject = false;
  std::size_t argmax = 0;       // index into the scanned list
  std::size_t argmax_size = 0;  // |K| of the maximizer (0 when not a scan)
  std::vector<ScaleDetail> scales;
  double wallclock_ms = 0.0;
};

/// Sets the threshold and decision (reject iff statistic > threshold).
TestResult& apply_threshold(TestResult& r, double threshold) noexcept;

/// max over clusters of the standardized sum on slice t; ties go to the first cluster.
TestResult scan(const Field& field, const ClusterList& clusters, const NoiseModel& model,
                ExecPolicy policy = ExecPolicy::Parallel, int t = 0);
TestResult eps_scan(const Field& field, const EpsNet& net, const NoiseModel& model,
                    ExecPolicy policy = ExecPolicy::Parallel, int t = 0);

/// One scale of a multiscale test: the net for cluster scales in [2^-level, 2^-level+1).
struct ScaleNet {
  int level = 0;
  EpsNet net;
  double tau = 0.0;
};

/// tau_l = sqrt(2 log(m 2^{-l d} c)) + sqrt(2 log(l^2 + e)); the first log is floored at 0.
double default_tau(int level, std::size_t m, int dim, double c = 1.0);

/// Statistic max_l (T_l - tau_l) with threshold 0, so the test rejects iff some scale
/// exceeds its own threshold. Empty nets are skipped.
TestResult multiscale_test(const Field& field, std::span<const ScaleNet> scales, const NoiseModel& model,
                           ExecPolicy policy = ExecPolicy::Parallel);

/// Standardized sum over every node (slice 0).
TestResult average_test(const Field& field, const NoiseModel& model);

/// Likelihood-ratio test for a known K: reject iff standardized_sum(K) > Lambda / 2.
TestResult oracle_test(const Field& field, const Cluster& k, double lambda, const NoiseModel& model);

/// Maps a null field to a test statistic.
using Statistic = std::function<double(const Field&)>;

struct Calibration {
  double alpha = 0.05;
  std::size_t samples = 0;  // B
  double threshold = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> null_statistics;  // sorted ascending
};

/// Index (1-based) of the conservative (1 - alpha) order statistic among B draws:
/// ceil((1 - alpha)(B + 1)). Throws DomainError when it exceeds B.
std::size_t quantile_rank(double alpha, std::size_t b);

/// Runs `statistic` on B null fields seeded derive_seed(seed, kCalibrationTag, b).
Calibration calibrate(const Statistic& statistic, std::size_t node_count, int horizon, const NoiseModel& model,
                      double alpha, std::size_t b, std::uint64_t seed, ExecPolicy policy = ExecPolicy::Parallel);

inline constexpr std::uint64_t kCalibrationTag = 0xCA11B;

/// log x for x >= e, else 1.
double log_dagger(double x);

/// Closed-form detection thresholds, by name:
///   thick      sqrt(2 log(m/k))                                    m, k
///   balls      sqrt(2 d log(1/lambda))                            d, lambda
///   cylinder   same as balls
///   thin       (1 + eps^2) sqrt(2 log N + 2 d log(1/lambda))       N, d, lambda, eps
///   thin-lb    sqrt(2 (d - p) log(1/r) + 2 p log(1/lambda))        d, p, r, lambda
///   band       sqrt(l/h)                                          l, h
///   band-any   sqrt(l/h + log(m/h^d) + log†log l)                  l, h, m, d
///   band-lb-2d sqrt(l/h) / (log† l sqrt(log h + log†log l))        l, h
///   band-lb    sqrt(l/h) / (log† h log†log h)                      l, h
///   animal     sqrt(2 log m)                                       m
///   bernoulli  1/2 + sqrt(2 log(m/k)) / (8 sqrt k)  (a probability) m, k
///   poisson    1 + sqrt(2 log(m/k)) / sqrt k        (a mean)        m, k
/// Missing or invalid parameters throw DomainError.
double rate(std::string_view name, const std::map<std::string, double>& params);
std::vector<std::string> rate_names();

}  // namespace scanlab
