#include <benchmark/benchmark.h>

#include <random>

#include "orbitcodes/classify.hpp"
#include "orbitcodes/orbit.hpp"
#include "orbitcodes/subspace.hpp"
#include "orbitcodes/vform.hpp"

using namespace orbitcodes;

namespace {

const FieldTower& tower64() {
  static FieldTower t(2, 1, 6);
  return t;
}

const FieldTower& tower729() {
  static FieldTower t(3, 1, 6);
  return t;
}

Subspace sample_subspace(const FieldTower& t, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  while (true) {
    std::vector<Felt> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(t.from_exponent(rng() % (t.order() - 1)));
    Subspace s = Subspace::span(t, gens);
    if (s.dim() == 3) return s;
  }
}

}  // namespace

static void BM_FieldMul(benchmark::State& state) {
  const FieldTower& t = tower729();
  Felt a = t.from_exponent(17), b = t.from_exponent(401);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a = a * b);
  }
}
BENCHMARK(BM_FieldMul);

static void BM_FieldAdd(benchmark::State& state) {
  const FieldTower& t = tower729();
  Felt a = t.from_exponent(17), b = t.from_exponent(401);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a = a + b);
    if (a.is_zero()) a = b;
  }
}
BENCHMARK(BM_FieldAdd);

static void BM_Span(benchmark::State& state) {
  const FieldTower& t = tower729();
  std::vector<Felt> gens{t.from_exponent(3), t.from_exponent(77), t.from_exponent(240)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(Subspace::span(t, gens));
  }
}
BENCHMARK(BM_Span);

static void BM_IsSidon(benchmark::State& state) {
  Subspace s = sample_subspace(tower729(), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_sidon(s));
  }
}
BENCHMARK(BM_IsSidon);

static void BM_SquareSpan(benchmark::State& state) {
  Subspace s = sample_subspace(tower729(), 12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(square_span(s));
  }
}
BENCHMARK(BM_SquareSpan);

static void BM_MinDistance(benchmark::State& state) {
  Subspace s = sample_subspace(state.range(0) == 0 ? tower64() : tower729(), 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(min_distance(s));
  }
}
BENCHMARK(BM_MinDistance)->Arg(0)->Arg(1);

static void BM_CanonicalRep(benchmark::State& state) {
  Subspace s = sample_subspace(tower729(), 14);
  for (auto _ : state) {
    benchmark::DoNotOptimize(canonical_orbit_rep(s));
  }
}
BENCHMARK(BM_CanonicalRep);

static void BM_Classify3(benchmark::State& state) {
  Subspace s = sample_subspace(tower729(), 15);
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify3(s));
  }
}
BENCHMARK(BM_Classify3);

static void BM_Equivalent(benchmark::State& state) {
  const FieldTower& t = tower64();
  Subspace s1 = sample_subspace(t, 16);
  Subspace s2 = scale(t.from_exponent(23), aut_image(s1, FieldAut{2}));
  for (auto _ : state) {
    benchmark::DoNotOptimize(equivalent(s1, s2));
  }
}
BENCHMARK(BM_Equivalent);

static void BM_PairSpaceEquivalent(benchmark::State& state) {
  const FieldTower& t = tower729();
  Felt gamma = t.from_exponent(5);
  while (t.in_subfield_rel(gamma, 3)) gamma = gamma * t.generator();
  VForm v1 = build_v(QPoly::x_q(t), gamma);
  VForm v2 = build_v(QPoly::trace(t), gamma);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pair_space_equivalent(v1, v2));
  }
}
BENCHMARK(BM_PairSpaceEquivalent);

static void BM_WeightSpectrum(benchmark::State& state) {
  USpace u = USpace::graph(QPoly::trace(tower729()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(weight_spectrum(u));
  }
}
BENCHMARK(BM_WeightSpectrum);

static void BM_Census25(benchmark::State& state) {
  FieldTower t(2, 1, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(census(t));
  }
}
BENCHMARK(BM_Census25);

static void BM_TowerBuild(benchmark::State& state) {
  for (auto _ : state) {
    FieldTower t(2, 1, static_cast<unsigned>(state.range(0)));
    benchmark::DoNotOptimize(t.order());
  }
}
BENCHMARK(BM_TowerBuild)->Arg(6)->Arg(10)->Arg(14);

BENCHMARK_MAIN();
