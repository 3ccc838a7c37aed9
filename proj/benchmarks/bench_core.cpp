// Copyright 2026 The qsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include "qsep/correlation.hpp"
#include "qsep/extraction.hpp"
#include "qsep/strategy.hpp"

namespace qsep {
namespace {

Strategy ideal(std::size_t d) {
    return d % 2 ? many_answers_ideal(psi_N(d)) : many_questions_ideal(psi_N(d));
}

void BM_Evaluate(benchmark::State &st) {
    const Strategy s = ideal(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(evaluate(s));
}
BENCHMARK(BM_Evaluate)->DenseRange(3, 8);

void BM_SwapIsometry(benchmark::State &st) {
    const auto d = static_cast<std::size_t>(st.range(0));
    const Strategy s = perturb(ideal(d), 1e-3, 1);
    const ExtractionKit kit = build_kit(s);
    const SchmidtState c = psi_N(d);
    for (auto _ : st) benchmark::DoNotOptimize(swap_isometry(kit, s.state, c));
}
BENCHMARK(BM_SwapIsometry)->DenseRange(3, 8);

void BM_BuildKit(benchmark::State &st) {
    const Strategy s = perturb(ideal(static_cast<std::size_t>(st.range(0))), 1e-3, 1);
    for (auto _ : st) benchmark::DoNotOptimize(build_kit(s));
}
BENCHMARK(BM_BuildKit)->DenseRange(3, 8);

void BM_SeparatingDistance(benchmark::State &st) {
    const auto K = static_cast<std::size_t>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(separating_distance(Family::kManyAnswers, 3, K));
}
BENCHMARK(BM_SeparatingDistance)->Arg(11)->Arg(21)->Arg(31)->Unit(benchmark::kMillisecond);

void BM_LowRankDistance(benchmark::State &st) {
    const SchmidtSpectrum spec = psi_N(static_cast<std::size_t>(st.range(0))).spectrum();
    for (auto _ : st) benchmark::DoNotOptimize(low_rank_distance(spec, 3));
}
BENCHMARK(BM_LowRankDistance)->Arg(9)->Arg(31)->Arg(101);

void BM_Schmidt(benchmark::State &st) {
    const PureState psi = psi_N(static_cast<std::size_t>(st.range(0))).pure_state();
    for (auto _ : st) benchmark::DoNotOptimize(schmidt(psi));
}
BENCHMARK(BM_Schmidt)->Arg(8)->Arg(32)->Arg(64);

}  // namespace
}  // namespace qsep

BENCHMARK_MAIN();
