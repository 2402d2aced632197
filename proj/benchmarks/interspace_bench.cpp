/*
   Copyright 2026 The interspace Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "interspace/haar.hpp"
#include "interspace/kfunctional.hpp"
#include "interspace/lazy_block.hpp"
#include "interspace/models.hpp"
#include "interspace/rng.hpp"

namespace {

using namespace interspace;

std::vector<double> normals(std::size_t n, std::uint64_t seed)
{
    std::vector<double> v(n);
    GaussianStream({seed, 0, StreamPurpose::Auxiliary, 0}).fill(1, v);
    return v;
}

void BM_Philox(benchmark::State& state)
{
    std::uint32_t c = 0;
    for (auto _ : state) {
        auto out = Philox4x32::encrypt({c, 0, 0, 0}, {7, 9});
        benchmark::DoNotOptimize(out);
        ++c;
    }
    state.SetItemsProcessed(state.iterations() * 4);
}
BENCHMARK(BM_Philox);

void BM_GaussianFill(benchmark::State& state)
{
    std::vector<double> v(static_cast<std::size_t>(state.range(0)));
    const GaussianStream g({1, 2, StreamPurpose::Coefficients, 0});
    for (auto _ : state) {
        g.fill(1, v);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GaussianFill)->Arg(1 << 10)->Arg(1 << 16);

void BM_Synthesize(benchmark::State& state)
{
    const int level = static_cast<int>(state.range(0));
    const CoeffSeq xi(normals(std::size_t{1} << level, 3));
    for (auto _ : state)
        benchmark::DoNotOptimize(synthesize(xi, level));
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << level));
}
BENCHMARK(BM_Synthesize)->DenseRange(8, 16, 4);

void BM_Analyze(benchmark::State& state)
{
    const int level = static_cast<int>(state.range(0));
    const auto p = synthesize(CoeffSeq(normals(std::size_t{1} << level, 4)), level);
    for (auto _ : state)
        benchmark::DoNotOptimize(analyze(p));
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << level));
}
BENCHMARK(BM_Analyze)->DenseRange(8, 16, 4);

void BM_LazyBlockDecision(benchmark::State& state)
{
    const std::uint64_t first = (std::uint64_t{1} << state.range(0)) + 1;
    const std::uint64_t last = std::uint64_t{1} << (state.range(0) + 4);
    std::uint64_t r = 0;
    for (auto _ : state) {
        LazyBlockSup b(first, last, {5, r++, StreamPurpose::Coefficients, 0});
        benchmark::DoNotOptimize(b.exceeds(0.02));
    }
}
BENCHMARK(BM_LazyBlockDecision)->Arg(12)->Arg(20)->Arg(30);

void BM_TautString(benchmark::State& state)
{
    const int level = static_cast<int>(state.range(0));
    const auto p = synthesize(CoeffSeq(normals(std::size_t{1} << level, 6)), level);
    const double s = 0.2 * sup_norm(p);
    for (auto _ : state)
        benchmark::DoNotOptimize(tube_h1(p, s));
}
BENCHMARK(BM_TautString)->DenseRange(6, 12, 3);

void BM_KFunctional(benchmark::State& state)
{
    const auto p = synthesize(CoeffSeq(normals(1024, 8)), 10);
    for (auto _ : state)
        benchmark::DoNotOptimize(k_functional(p, 0.05));
}
BENCHMARK(BM_KFunctional);

} // namespace

BENCHMARK_MAIN();
