#include <benchmark/benchmark.h>

#include "cli/suites.hpp"
#include "gausschan/channel.hpp"
#include "gausschan/dilation.hpp"
#include "gausschan/interferometer.hpp"

using namespace gausschan;

static void BM_Validity(benchmark::State& state) {
  const auto ch = cli::oracle_channel(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(validity(ch));
}
BENCHMARK(BM_Validity)->RangeMultiplier(2)->Range(1, 64);

static void BM_SkewCanonical(benchmark::State& state) {
  const auto n = state.range(0);
  Matrix k = Matrix::Random(n, n);
  k = k - Matrix(k.transpose());
  for (auto _ : state) benchmark::DoNotOptimize(skew_canonical(k));
}
BENCHMARK(BM_SkewCanonical)->RangeMultiplier(4)->Range(4, 256);

// O(d^3) contract: doubling d should cost roughly 8x.
static void BM_BuildDilation(benchmark::State& state) {
  const auto ch = cli::oracle_channel(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(build_dilation(ch));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildDilation)->RangeMultiplier(2)->Range(1, 64)->Complexity(benchmark::oNCubed)->Unit(
    benchmark::kMillisecond);

static void BM_BuildDilationSingular(benchmark::State& state) {
  const auto ch = cli::rank_deficient_fixture(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(build_dilation(ch));
}
BENCHMARK(BM_BuildDilationSingular)->DenseRange(2, 8, 3)->Unit(benchmark::kMicrosecond);

static void BM_VerifyDilation(benchmark::State& state) {
  const auto ch = cli::oracle_channel(static_cast<int>(state.range(0)), 4);
  const auto dil = build_dilation(ch).dilation;
  for (auto _ : state) benchmark::DoNotOptimize(verify_dilation(dil, ch, 20, 1));
}
BENCHMARK(BM_VerifyDilation)->RangeMultiplier(2)->Range(1, 16)->Unit(benchmark::kMicrosecond);

static void BM_DecidePassive(benchmark::State& state) {
  const auto ch = cli::passive_oracle_channel(static_cast<int>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(decide(ch));
}
BENCHMARK(BM_DecidePassive)->RangeMultiplier(2)->Range(1, 16)->Unit(benchmark::kMicrosecond);

static void BM_FindQOrthogonal(benchmark::State& state) {
  const auto ch = cli::passive_oracle_channel(static_cast<int>(state.range(0)), 6);
  const Matrix sy = sqrt_psd(ch.y);
  FindQOptions opts;
  opts.group = QGroup::Orthogonal;
  for (auto _ : state) benchmark::DoNotOptimize(find_q(ch.x, sy, opts));
}
BENCHMARK(BM_FindQOrthogonal)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMicrosecond);

static void BM_FdMemberSample(benchmark::State& state) {
  const auto rep = fd_counterexample(2);
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fd_member_sample(rep.channel.x, rep.channel.y, rep.channel.form, 500, 1, {}, workers));
  }
}
BENCHMARK(BM_FdMemberSample)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
