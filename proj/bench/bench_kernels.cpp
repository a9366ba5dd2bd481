// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "scanlab/clusters.hpp"
#include "scanlab/detect.hpp"
#include "scanlab/kernels.hpp"
#include "scanlab/metric.hpp"
#include "scanlab/models.hpp"

using namespace scanlab;

namespace {

ClusterList ball_class(const NodeSet& net, double radius) {
  BallStream s(net, radius);
  return collect(s);
}

void BM_ScanMax(benchmark::State& state, ExecPolicy policy) {
  const auto net = make_lattice(2, static_cast<int>(state.range(0)));
  const auto list = ball_class(net, 4.5);
  const auto field = sample_null(net, NoiseModel{}, 0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(scan_max(list, field.values(), 0.0, 1.0, policy));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * list.total_ids()));
}

void BM_VerifyCover(benchmark::State& state, ExecPolicy policy) {
  const auto net = make_lattice(2, static_cast<int>(state.range(0)));
  const auto list = ball_class(net, 3.5);
  const auto eps_net = build_net(list, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(verify_cover(eps_net, list, net.size(), policy));
}

void BM_Calibrate(benchmark::State& state, ExecPolicy policy) {
  const auto net = make_lattice(2, 64);
  const auto list = ball_class(net, 2.5);
  const NoiseModel g;
  const Statistic stat = [&](const Field& f) { return scan(f, list, g, ExecPolicy::Serial).statistic; };
  for (auto _ : state) benchmark::DoNotOptimize(calibrate(stat, net.size(), 0, g, 0.05, 99, 1, policy));
}

}  // namespace

BENCHMARK_CAPTURE(BM_ScanMax, serial, ExecPolicy::Serial)->Arg(64)->Arg(256);
BENCHMARK_CAPTURE(BM_ScanMax, parallel, ExecPolicy::Parallel)->Arg(64)->Arg(256);
BENCHMARK_CAPTURE(BM_VerifyCover, serial, ExecPolicy::Serial)->Arg(32)->Arg(64);
BENCHMARK_CAPTURE(BM_VerifyCover, parallel, ExecPolicy::Parallel)->Arg(32)->Arg(64);
BENCHMARK_CAPTURE(BM_Calibrate, serial, ExecPolicy::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Calibrate, parallel, ExecPolicy::Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
