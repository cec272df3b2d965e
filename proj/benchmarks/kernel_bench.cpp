#include <benchmark/benchmark.h>

#include "etale/corpus.hpp"
#include "etale/groupoid.hpp"
#include "etale/ppg_sheafify.hpp"
#include "etale/presheaf.hpp"
#include "etale/pseudogroup.hpp"

using namespace etale;

namespace {

void BM_SpacesUpToHomeomorphism(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spaces_up_to_homeomorphism(n));
}
BENCHMARK(BM_SpacesUpToHomeomorphism)->DenseRange(2, 4);

void BM_HomeoL(benchmark::State& state) {
  const auto space = share(FiniteSpace::discrete(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(build_homeo_l(space));
}
BENCHMARK(BM_HomeoL)->DenseRange(1, 3);

void BM_Sheafify(benchmark::State& state) {
  Rng rng(kDefaultSeed);
  const auto space = share(FiniteSpace::discrete(static_cast<std::size_t>(state.range(0))));
  const auto p = random_presheaf(space, rng);
  for (auto _ : state) benchmark::DoNotOptimize(sheafify(p));
}
BENCHMARK(BM_Sheafify)->DenseRange(2, 4);

void BM_SheafCheck(benchmark::State& state) {
  const auto space = share(FiniteSpace::discrete(3));
  const auto p = sheafify(constant_presheaf(space, {"a", "b", "c"})).sheaf;
  const auto mode = state.range(0) == 0 ? SheafMode::Canonical : SheafMode::Exhaustive;
  for (auto _ : state) benchmark::DoNotOptimize(is_sheaf(p, mode));
}
BENCHMARK(BM_SheafCheck)->Arg(0)->Arg(1);

void BM_GroupoidRoundTrip(benchmark::State& state) {
  const auto g = pair_groupoid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(roundtrip_groupoid(g));
}
BENCHMARK(BM_GroupoidRoundTrip)->DenseRange(1, 3);

void BM_PseudogroupRoundTrip(benchmark::State& state) {
  const auto c = build_homeo_l(share(FiniteSpace::chain(static_cast<std::size_t>(state.range(0)))));
  for (auto _ : state) benchmark::DoNotOptimize(roundtrip_pseudogroup(c, Dialect::NonT1));
}
BENCHMARK(BM_PseudogroupRoundTrip)->DenseRange(2, 4);

void BM_PpgSheafify(benchmark::State& state) {
  const auto c = truncations(build_homeo_l(share(FiniteSpace::discrete(2)))).front();
  const auto order = state.range(0) == 0 ? ClosureOrder::ComposeFirst : ClosureOrder::GlueFirst;
  for (auto _ : state) benchmark::DoNotOptimize(ppg_sheafify(c, order));
}
BENCHMARK(BM_PpgSheafify)->Arg(0)->Arg(1);

void BM_Universality(benchmark::State& state) {
  const auto c = truncations(build_homeo_l(share(FiniteSpace::discrete(2)))).front();
  const auto hat = ppg_sheafify(c);
  for (auto _ : state) benchmark::DoNotOptimize(check_universality(c, hat, hat.sheaf, hat.unit));
}
BENCHMARK(BM_Universality);

void BM_ExhaustiveGroupoidCorpus(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_etale_groupoids(3, 9));
}
BENCHMARK(BM_ExhaustiveGroupoidCorpus)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
