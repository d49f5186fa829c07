#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "codedshift/families.hpp"
#include "codedshift/gmeasure.hpp"
#include "codedshift/spectral.hpp"
#include "codedshift/verejones.hpp"

using namespace codedshift;

static void BM_SolveLambdaFullShift(benchmark::State& state) {
  auto sys = sgap_system({IntSet::naturals()});
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_lambda(*sys, n));
}
BENCHMARK(BM_SolveLambdaFullShift)->Arg(10)->Arg(20)->Arg(40);

static void BM_SolveLambdaCounterexample(benchmark::State& state) {
  auto sys = example51_system();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_lambda(*sys, n));
}
BENCHMARK(BM_SolveLambdaCounterexample)->Arg(10)->Arg(20)->Arg(40);

static void BM_KappaCertified(benchmark::State& state) {
  auto sys = example51_system();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kappa_certified(*sys, n));
}
BENCHMARK(BM_KappaCertified)->Arg(10)->Arg(20);

// fresh spec each time so the lambda/kappa cache is part of the cost
static void BM_CylinderFullShift(benchmark::State& state) {
  auto sys = sgap_system({IntSet::naturals()});
  Word w = word_from_digits(std::string(static_cast<std::size_t>(state.range(0)), '1'));
  for (auto _ : state) benchmark::DoNotOptimize(cylinder_measure(mme_spec(sys), w, 20));
}
BENCHMARK(BM_CylinderFullShift)->Arg(1)->Arg(4)->Arg(8);

static void BM_CylinderWarm(benchmark::State& state) {
  auto spec = mme_spec(sgap_system({IntSet::naturals()}));
  Word w = word_from_digits("0110101");
  cylinder_measure(spec, w, 20);
  for (auto _ : state) benchmark::DoNotOptimize(cylinder_measure(spec, w, 20));
}
BENCHMARK(BM_CylinderWarm);

static void BM_CylinderDyck(benchmark::State& state) {
  auto spec = mme_spec(dyck_system({}));
  Word w = dyck::from_brackets("(()[])((");
  cylinder_measure(spec, w, 12);
  for (auto _ : state) benchmark::DoNotOptimize(cylinder_measure(spec, w, 12));
}
BENCHMARK(BM_CylinderDyck);

static void BM_IdealMeasureFullShift(benchmark::State& state) {
  auto spec = mme_spec(sgap_system({IntSet::naturals()}));
  auto lang = sgap_language({IntSet::naturals()});
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ideal_measure(spec, *lang, n));
}
BENCHMARK(BM_IdealMeasureFullShift)->Arg(2)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static IdealMeasure random_measure(std::mt19937_64& rng, std::size_t atoms) {
  IdealMeasure m;
  m.alphabet_size = 2;
  std::uniform_int_distribution<int> bit(0, 1);
  for (std::size_t i = 0; i < atoms; ++i) {
    Word u;
    for (int k = 0; k < 24; ++k) u.push_back(to_char(bit(rng)));
    m.atoms.push_back({periodic_point(u, 0), Rat(1, static_cast<unsigned long>(atoms))});
  }
  return m;
}

static void BM_W1Exact(benchmark::State& state) {
  std::mt19937_64 rng(7);
  auto n = static_cast<std::size_t>(state.range(0));
  IdealMeasure a = random_measure(rng, n), b = random_measure(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(w1_exact(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_W1Exact)->RangeMultiplier(8)->Range(8, 32768)->Complexity(benchmark::oNLogN);

static void BM_W1Transport(benchmark::State& state) {
  std::mt19937_64 rng(7);
  auto n = static_cast<std::size_t>(state.range(0));
  IdealMeasure a = random_measure(rng, n), b = random_measure(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(w1_transport(a, b));
}
BENCHMARK(BM_W1Transport)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_SardinasPatterson(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> bit(0, 1), len(1, 5);
  std::vector<std::vector<Word>> codes;
  while (codes.size() < 64) {
    std::vector<Word> c;
    for (int i = 0; i < 6; ++i) {
      Word w;
      for (int k = len(rng); k > 0; --k) w.push_back(to_char(bit(rng)));
      if (std::find(c.begin(), c.end(), w) == c.end()) c.push_back(w);
    }
    codes.push_back(c);
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sardinas_patterson(codes[i++ % codes.size()]));
}
BENCHMARK(BM_SardinasPatterson);

BENCHMARK_MAIN();
