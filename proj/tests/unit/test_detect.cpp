#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scanlab/clusters.hpp"
#include "scanlab/detect.hpp"
#include "scanlab/errors.hpp"
#include "scanlab/metric.hpp"
#include "support.hpp"

using namespace scanlab;

namespace {

ClusterList balls(const NodeSet& net, std::initializer_list<double> radii) {
  ClusterList out;
  for (double r : radii) {
    BallStream s(net, r);
    const auto part = collect(s);
    for (std::size_t i = 0; i < part.size(); ++i) out.push_back(part[i]);
  }
  return out;
}

double rate_of(const char* name, std::map<std::string, double> p) { return rate(name, p); }

}  // namespace

TEST_CASE("scan of three nested clusters on a line") {
  Field f(3, 0);
  f.at(0) = 1;
  f.at(1) = 2;
  f.at(2) = 3;
  ClusterList list;
  list.push_back(Cluster::from_ids({0}));
  list.push_back(Cluster::from_ids({0, 1}));
  list.push_back(Cluster::from_ids({0, 1, 2}));
  const auto r = scan(f, list, NoiseModel{});
  CHECK(r.statistic == doctest::Approx(6.0 / std::sqrt(3.0)));
  CHECK(r.argmax == 2);
  CHECK(r.argmax_size == 3);
  CHECK(std::isinf(r.threshold));

  ClusterList one;
  one.push_back(Cluster::from_ids({1, 2}));
  CHECK(scan(f, one, NoiseModel{}).statistic == doctest::Approx(5.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(scan(f, ClusterList{}, NoiseModel{}), DomainError);
}

TEST_CASE("null scan over disjoint clusters concentrates below sqrt(2 log N)") {
  const std::size_t n = 10000;
  ClusterList singles;
  for (NodeId v = 0; v < n; ++v) singles.push_back(Cluster::from_ids({v}));
  std::vector<double> stats;
  for (std::uint64_t t = 0; t < 100; ++t) stats.push_back(scan(sample_null(n, NoiseModel{}, 0, t), singles, NoiseModel{}).statistic);
  std::nth_element(stats.begin(), stats.begin() + 50, stats.end());
  CHECK(std::abs(stats[50] - std::sqrt(2.0 * std::log(double(n)))) < 0.5);
}

TEST_CASE("property: scan >= eps_scan >= any member, and the full net equals the scan") {
  const auto net = make_lattice(2, 24);
  const auto list = balls(net, {1.5, 2.5, 3.5});
  const auto full = build_net(list, 1e-9);
  const auto coarse = build_net(list, 0.7);
  const NoiseModel g;
  for (std::uint64_t t = 0; t < 30; ++t) {
    const auto f = sample_null(net.size(), g, 0, t);
    const double s = scan(f, list, g).statistic;
    const double e = eps_scan(f, coarse, g).statistic;
    CHECK(s >= e);
    CHECK(eps_scan(f, full, g).statistic == s);
    for (std::size_t i = 0; i < coarse.members.size(); i += 17) CHECK(e >= standardized_sum(f, coarse.members[i], g));
  }
}

TEST_CASE("eps_scan keeps most of a planted thick cluster's signal") {
  const auto net = make_lattice(2, 48);
  const auto list = balls(net, {2.5, 3.5, 4.5});
  const auto coarse = build_net(list, 0.5);
  const NoiseModel g;
  const double lambda = 6.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto k = list.cluster((t * 97) % list.size());
    const auto f = plant(sample_null(net.size(), g, 0, t), k, SignalSpec{lambda, {}}, g, t + 5000);
    CHECK(eps_scan(f, coarse, g).statistic >= standardized_sum(f, k, g) - lambda * 0.5 - 3.0);
  }
}

TEST_CASE("multiscale: one nonempty net reduces to a thresholded eps_scan") {
  const auto net = make_lattice(2, 16);
  const auto list = balls(net, {2.5});
  std::vector<ScaleNet> scales(3);
  for (int i = 0; i < 3; ++i) scales[i].level = 2 + i;
  scales[1].net = build_net(list, 0.5);
  scales[1].tau = default_tau(3, net.size(), 2);
  const NoiseModel g;
  const auto f = sample_null(net.size(), g, 0, 3);
  const auto r = multiscale_test(f, scales, g);
  CHECK(r.statistic == doctest::Approx(eps_scan(f, scales[1].net, g).statistic - scales[1].tau));
  CHECK(r.threshold == 0.0);
  CHECK(r.scales.size() == 1);
}

TEST_CASE("default tau") {
  CHECK(default_tau(3, 4096, 2) == doctest::Approx(std::sqrt(2 * std::log(64.0)) + std::sqrt(2 * std::log(9 + std::numbers::e))));
  CHECK(default_tau(7, 4096, 2) == doctest::Approx(std::sqrt(2 * std::log(49 + std::numbers::e))));
}

TEST_CASE("multiscale null false-alarm rate at default thresholds") {
  // Level 6 (five-node balls) is left out: there the default tau sits below the null maximum.
  const auto net = make_lattice(2, 64);
  std::vector<ScaleNet> scales;
  for (int level : {2, 3, 4, 5}) {
    const double r = 64.0 * std::pow(2.0, -level) + 0.05;
    scales.push_back(ScaleNet{level, build_net(balls(net, {r}), 0.5), default_tau(level, net.size(), 2)});
  }
  int alarms = 0;
  for (std::uint64_t t = 0; t < 200; ++t) alarms += multiscale_test(sample_null(net.size(), NoiseModel{}, 0, t), scales, NoiseModel{}).reject;
  CHECK(alarms <= 20);
}

TEST_CASE("average test") {
  Field zero(64, 0);
  CHECK(average_test(zero, NoiseModel{}).statistic == 0.0);
  const NoiseModel g;
  std::vector<NodeId> ids(256);
  for (NodeId i = 0; i < 256; ++i) ids[i] = i;
  const auto k = Cluster::from_ids(ids);
  int hits = 0;
  double mean = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    const auto f = plant(sample_null(1024, g, 0, t), k, SignalSpec{20.0, {}}, g, t + 777);
    auto r = average_test(f, g);
    mean += r.statistic / 200;
    hits += apply_threshold(r, 3.0).reject;
  }
  CHECK(mean == doctest::Approx(10.0).epsilon(0.03));
  CHECK(hits >= 198);
}

TEST_CASE("oracle test") {
  const NoiseModel g;
  const auto k = Cluster::from_ids({0, 1, 2, 3});
  const auto f = sample_null(16, g, 0, 1);
  CHECK(oracle_test(f, k, 0.0, g).threshold == 0.0);
  CHECK(oracle_test(f, k, 2.0, g).threshold == 1.0);
  int type1 = 0, type2 = 0;
  const int n = 10000;
  for (int t = 0; t < n; ++t) {
    type1 += oracle_test(sample_null(16, g, 0, 2 * t), k, 2.0, g).reject;
    type2 += !oracle_test(plant(sample_null(16, g, 0, 2 * t + 1), k, SignalSpec{2.0, {}}, g, t), k, 2.0, g).reject;
  }
  CHECK(double(type1 + type2) / n == doctest::Approx(2 * oracle::normal_tail(1.0)).epsilon(0.01 / 0.317));
}

TEST_CASE("calibration order statistic") {
  CHECK(quantile_rank(0.01, 99) == 99);
  CHECK(quantile_rank(0.05, 99) == 95);
  CHECK(quantile_rank(0.05, 399) == 380);
  CHECK_THROWS_AS(quantile_rank(0.001, 99), DomainError);

  const NoiseModel g;
  const auto max_stat = [](const Field& f) { return *std::max_element(f.values().begin(), f.values().end()); };
  const auto c = calibrate(max_stat, 10, 0, g, 0.01, 99, 5);
  CHECK(c.threshold == c.null_statistics.back());
  CHECK(std::is_sorted(c.null_statistics.begin(), c.null_statistics.end()));

  const auto zero = calibrate([](const Field&) { return 0.0; }, 10, 0, g, 0.05, 199, 5);
  CHECK(zero.threshold == 0.0);
  TestResult r;
  r.statistic = 1e-12;
  CHECK(apply_threshold(r, zero.threshold).reject);

  CHECK_THROWS_AS(calibrate(max_stat, 10, 0, g, 0.05, 50, 5), DomainError);

  const auto serial = calibrate(max_stat, 50, 0, g, 0.05, 199, 8, ExecPolicy::Serial);
  const auto parallel = calibrate(max_stat, 50, 0, g, 0.05, 199, 8, ExecPolicy::Parallel);
  CHECK(serial.null_statistics == parallel.null_statistics);
}

TEST_CASE("calibrated ball scan holds its level on fresh nulls") {
  const auto net = make_lattice(2, 64);
  const auto list = balls(net, {2.5});
  const NoiseModel g;
  const auto stat = [&](const Field& f) { return scan(f, list, g, ExecPolicy::Serial).statistic; };
  const auto cal = calibrate(stat, net.size(), 0, g, 0.05, 400, 12);
  int rejections = 0;
  for (std::uint64_t t = 0; t < 400; ++t) rejections += stat(sample_null(net.size(), g, 0, derive_seed(99, t))) > cal.threshold;
  CHECK(std::abs(rejections / 400.0 - 0.05) <= 0.03);
}

TEST_CASE("rate formulas") {
  CHECK(rate_of("thick", {{"m", 10}, {"k", 10}}) == 0.0);
  CHECK(rate_of("thick", {{"m", 2 * std::numbers::e}, {"k", 2}}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(rate_of("thick", {{"m", 16384}, {"k", 49}}) == doctest::Approx(std::sqrt(2 * std::log(16384.0 / 49))));
  CHECK(rate_of("bernoulli", {{"m", 2 * std::numbers::e}, {"k", 2}}) == doctest::Approx(0.625));
  CHECK(rate_of("poisson", {{"m", 400 * std::numbers::e}, {"k", 400}}) == doctest::Approx(1.0 + std::sqrt(2.0) / 20));
  CHECK(rate_of("balls", {{"d", 2}, {"lambda", 0.25}}) == doctest::Approx(std::sqrt(4 * std::log(4.0))));
  CHECK(rate_of("cylinder", {{"d", 2}, {"lambda", 0.25}}) == rate_of("balls", {{"d", 2}, {"lambda", 0.25}}));
  CHECK(rate_of("band", {{"l", 32}, {"h", 4}}) == doctest::Approx(std::sqrt(8.0)));
  CHECK(rate_of("animal", {{"m", 1}}) == 0.0);
  CHECK(rate_of("thin", {{"N", 1}, {"d", 2}, {"lambda", 0.5}, {"eps", 0}}) == doctest::Approx(std::sqrt(4 * std::log(2.0))));
  CHECK(rate_of("thin-lb", {{"d", 2}, {"p", 2}, {"r", 0.1}, {"lambda", 0.5}}) == doctest::Approx(std::sqrt(4 * std::log(2.0))));
  CHECK(rate_of("band-lb", {{"l", 16}, {"h", 2}}) == doctest::Approx(std::sqrt(8.0)));
  CHECK(rate_of("band-lb-2d", {{"l", 2}, {"h", 2}}) == doctest::Approx(1.0 / std::sqrt(std::log(2.0) + 1.0)));
  CHECK(rate_of("band-any", {{"l", 8}, {"h", 2}, {"m", 64}, {"d", 2}}) == doctest::Approx(std::sqrt(4 + std::log(16.0) + 1)));
  CHECK(log_dagger(1.0) == 1.0);
  CHECK(log_dagger(std::exp(2.0)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(rate_of("thick", {{"m", 10}}), DomainError);
  CHECK_THROWS_AS(rate_of("balls", {{"d", 2}, {"lambda", 1.5}}), DomainError);
  CHECK_THROWS_AS(rate_of("nope", {}), DomainError);
  CHECK(rate_names().size() == 12);
}
