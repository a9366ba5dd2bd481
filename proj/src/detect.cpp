#include "scanlab/detect.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "scanlab/errors.hpp"
#include "scanlab/rng.hpp"

namespace scanlab {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

TestResult& apply_threshold(TestResult& r, double threshold) noexcept {
  r.threshold = threshold;
  r.reject = r.statistic > threshold;
  return r;
}

TestResult scan(const Field& field, const ClusterList& clusters, const NoiseModel& model, ExecPolicy policy,
                int t) {
  if (clusters.empty()) throw DomainError("scan over an empty cluster list");
  const auto start = Clock::now();
  const auto best = scan_max(clusters, field.slice(t), model.null_mean(), model.sigma(), policy);
  TestResult r;
  r.statistic = best.value;
  r.argmax = best.index;
  r.argmax_size = clusters[best.index].size();
  r.wallclock_ms = elapsed_ms(start);
  return r;
}

TestResult eps_scan(const Field& field, const EpsNet& net, const NoiseModel& model, ExecPolicy policy, int t) {
  return scan(field, net.members, model, policy, t);
}

double default_tau(int level, std::size_t m, int dim, double c) {
  const double arg = static_cast<double>(m) * std::pow(2.0, -static_cast<double>(level) * dim) * c;
  const double first = arg > 1.0 ? std::sqrt(2.0 * std::log(arg)) : 0.0;
  const double l = static_cast<double>(level);
  return first + std::sqrt(2.0 * std::log(l * l + std::numbers::e));
}

TestResult multiscale_test(const Field& field, std::span<const ScaleNet> scales, const NoiseModel& model,
                           ExecPolicy policy) {
  const auto start = Clock::now();
  TestResult r;
  r.statistic = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& s : scales) {
    if (s.net.members.empty()) continue;
    const auto one = eps_scan(field, s.net, model, policy);
    ScaleDetail d{s.level, one.statistic, s.tau, one.argmax, one.statistic > s.tau};
    r.scales.push_back(d);
    const double excess = one.statistic - s.tau;
    if (!any || excess > r.statistic) {
      r.statistic = excess;
      r.argmax = one.argmax;
      r.argmax_size = one.argmax_size;
      any = true;
    }
  }
  if (!any) throw DomainError("multiscale test without any nonempty scale");
  apply_threshold(r, 0.0);
  r.wallclock_ms = elapsed_ms(start);
  return r;
}

TestResult average_test(const Field& field, const NoiseModel& model) {
  const auto x = field.slice(0);
  double s = 0.0;
  for (double v : x) s += v;
  const auto n = static_cast<double>(x.size());
  TestResult r;
  r.statistic = (s - n * model.null_mean()) / (model.sigma() * std::sqrt(n));
  r.argmax_size = x.size();
  return r;
}

TestResult oracle_test(const Field& field, const Cluster& k, double lambda, const NoiseModel& model) {
  TestResult r;
  r.statistic = standardized_sum(field, k, model);
  r.argmax_size = k.size();
  apply_threshold(r, lambda / 2.0);
  return r;
}

std::size_t quantile_rank(double alpha, std::size_t b) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  // The 1e-9 guard keeps exact products such as 0.99 * 100 from rounding up.
  const auto rank = static_cast<std::size_t>(std::ceil((1.0 - alpha) * static_cast<double>(b + 1) - 1e-9));
  if (rank > b || rank == 0)
    throw DomainError("B = " + std::to_string(b) + " null draws are too few for alpha = " + std::to_string(alpha));
  return rank;
}

Calibration calibrate(const Statistic& statistic, std::size_t node_count, int horizon, const NoiseModel& model,
                      double alpha, std::size_t b, std::uint64_t seed, ExecPolicy policy) {
  if (b < 99) throw DomainError("calibration needs B >= 99 null draws");
  const std::size_t rank = quantile_rank(alpha, b);
  Calibration cal;
  cal.alpha = alpha;
  cal.samples = b;
  cal.seed = seed;
  cal.null_statistics.assign(b, 0.0);
  parallel_for(b, policy, [&](std::size_t i) {
    const Field f = sample_null(node_count, model, horizon, derive_seed(seed, kCalibrationTag, i));
    cal.null_statistics[i] = statistic(f);
  });
  std::sort(cal.null_statistics.begin(), cal.null_statistics.end());
  cal.threshold = cal.null_statistics[rank - 1];
  return cal;
}

double log_dagger(double x) { return x >= std::numbers::e ? std::log(x) : 1.0; }

namespace {

double need(const std::map<std::string, double>& p, const char* key) {
  auto it = p.find(key);
  if (it == p.end()) throw DomainError(std::string("rate parameter '") + key + "' is required");
  if (!std::isfinite(it->second)) throw DomainError(std::string("rate parameter '") + key + "' is not finite");
  return it->second;
}

double positive(const std::map<std::string, double>& p, const char* key) {
  const double v = need(p, key);
  if (!(v > 0.0)) throw DomainError(std::string("rate parameter '") + key + "' must be positive");
  return v;
}

double unit_open(const std::map<std::string, double>& p, const char* key) {
  const double v = need(p, key);
  if (!(v > 0.0 && v < 1.0)) throw DomainError(std::string("rate parameter '") + key + "' must lie in (0,1)");
  return v;
}

double size_ratio(const std::map<std::string, double>& p) {
  const double m = positive(p, "m"), k = positive(p, "k");
  if (k > m) throw DomainError("rate needs k <= m");
  return m / k;
}

}  // namespace

std::vector<std::string> rate_names() {
  return {"thick", "balls", "cylinder", "thin", "thin-lb", "band", "band-any",
          "band-lb-2d", "band-lb", "animal", "bernoulli", "poisson"};
}

double rate(std::string_view name, const std::map<std::string, double>& p) {
  if (name == "thick") return std::sqrt(2.0 * std::log(size_ratio(p)));
  if (name == "balls" || name == "cylinder")
    return std::sqrt(2.0 * positive(p, "d") * std::log(1.0 / unit_open(p, "lambda")));
  if (name == "thin") {
    const double n = positive(p, "N"), d = positive(p, "d"), lambda = unit_open(p, "lambda");
    const double eps = need(p, "eps");
    if (n < 1.0) throw DomainError("covering number N must be >= 1");
    return (1.0 + eps * eps) * std::sqrt(2.0 * std::log(n) + 2.0 * d * std::log(1.0 / lambda));
  }
  if (name == "thin-lb") {
    const double d = positive(p, "d"), dim = need(p, "p"), r = unit_open(p, "r"), lambda = unit_open(p, "lambda");
    if (!(dim >= 0.0 && dim <= d)) throw DomainError("need 0 <= p <= d");
    return std::sqrt(2.0 * (d - dim) * std::log(1.0 / r) + 2.0 * dim * std::log(1.0 / lambda));
  }
  const auto band_ratio = [&] {
    const double l = positive(p, "l"), h = positive(p, "h");
    if (h > l) throw DomainError("band rates need l >= h");
    return l / h;
  };
  if (name == "band") return std::sqrt(band_ratio());
  if (name == "band-any") {
    const double ratio = band_ratio(), m = positive(p, "m"), d = positive(p, "d");
    const double l = need(p, "l"), h = need(p, "h");
    return std::sqrt(ratio + std::log(m / std::pow(h, d)) + log_dagger(std::log(l)));
  }
  if (name == "band-lb-2d") {
    const double ratio = band_ratio(), l = need(p, "l"), h = need(p, "h");
    return std::sqrt(ratio) / (log_dagger(l) * std::sqrt(std::log(h) + log_dagger(std::log(l))));
  }
  if (name == "band-lb") {
    const double ratio = band_ratio(), h = need(p, "h");
    return std::sqrt(ratio) / (log_dagger(h) * log_dagger(std::log(h)));
  }
  if (name == "animal") {
    const double m = positive(p, "m");
    return m >= 1.0 ? std::sqrt(2.0 * std::log(m)) : throw DomainError("animal rate needs m >= 1");
  }
  if (name == "bernoulli") {
    const double ratio = size_ratio(p), k = need(p, "k");
    return 0.5 + std::sqrt(2.0 * std::log(ratio)) / (8.0 * std::sqrt(k));
  }
  if (name == "poisson") {
    const double ratio = size_ratio(p), k = need(p, "k");
    return 1.0 + std::sqrt(2.0 * std::log(ratio)) / std::sqrt(k);
  }
  throw DomainError("unknown rate formula '" + std::string(name) + "'");
}

}  // namespace scanlab
