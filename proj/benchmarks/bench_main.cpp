#include <benchmark/benchmark.h>

#include <random>

#include "lfw/construct.hpp"
#include "lfw/framesim.hpp"

using namespace lfw;

namespace {

FieldConfigPtr field_for(std::int64_t q) {
  switch (q) {
    case 4: return FieldConfig::make(2, 2);
    case 8: return FieldConfig::make(2, 3);
    default: return FieldConfig::make(static_cast<unsigned>(q), 1);
  }
}

void BM_GfqMul(benchmark::State& state) {
  auto f = field_for(state.range(0));
  const unsigned q = f->q();
  FqCode acc = 1;
  for (auto _ : state) {
    for (FqCode a = 1; a < q; ++a) acc = f->add(f->mul(acc, a), 1);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_GfqMul)->Arg(2)->Arg(4)->Arg(8)->Arg(5);

void BM_LaurentMul(benchmark::State& state) {
  auto f = field_for(state.range(0));
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> code(0, static_cast<int>(f->q()) - 1);
  std::vector<Digit> a, b;
  for (int e = -8; e < 8; ++e) {
    a.emplace_back(e, static_cast<FqCode>(code(rng)));
    b.emplace_back(e, static_cast<FqCode>(code(rng)));
  }
  const FieldElement x(f, a), y(f, b);
  for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_LaurentMul)->Arg(2)->Arg(3)->Arg(4);

void BM_UOfIndex(benchmark::State& state) {
  auto f = field_for(state.range(0));
  std::uint64_t n = 0;
  for (auto _ : state) benchmark::DoNotOptimize(index_of_u(-u_of_index(f, n++ % 100000)));
}
BENCHMARK(BM_UOfIndex)->Arg(2)->Arg(5);

void BM_ClopenAlgebra(benchmark::State& state) {
  auto f = field_for(state.range(0));
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> code(0, static_cast<int>(f->q()) - 1), scale(0, 4);
  std::vector<Ball> ra, rb;
  for (int i = 0; i < 12; ++i) {
    const int k = scale(rng);
    std::vector<Digit> da, db;
    for (int e = -2; e < k; ++e) {
      da.emplace_back(e, static_cast<FqCode>(code(rng)));
      db.emplace_back(e, static_cast<FqCode>(code(rng)));
    }
    ra.emplace_back(FieldElement(f, da), k);
    rb.emplace_back(FieldElement(f, db), k);
  }
  const ClopenSet a(f, ra), b(f, rb);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cs_union(a, b));
    benchmark::DoNotOptimize(cs_subtract(a, b));
  }
}
BENCHMARK(BM_ClopenAlgebra)->Arg(2)->Arg(3);

void BM_Fold(benchmark::State& state) {
  auto f = field_for(state.range(0));
  const auto w = cs_union_all(f, shell_superwavelet(f, 4));
  for (auto _ : state) benchmark::DoNotOptimize(cs_fold(w));
}
BENCHMARK(BM_Fold)->Arg(2)->Arg(3)->Arg(5);

void BM_VerifyMultiwavelet(benchmark::State& state) {
  auto f = field_for(state.range(0));
  const auto w = shannon_multiwavelet(f);
  for (auto _ : state) benchmark::DoNotOptimize(verify_multiwavelet_set(w).passed());
}
BENCHMARK(BM_VerifyMultiwavelet)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

void BM_VerifySuperwavelet(benchmark::State& state) {
  auto f = field_for(2);
  const auto fam = shell_superwavelet(f, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_superwavelet(fam, SuperMode::Parseval).passed());
}
BENCHMARK(BM_VerifySuperwavelet)->DenseRange(1, 4);

void BM_ParsevalResidual(benchmark::State& state) {
  auto f = field_for(state.range(0));
  const auto family = indicator_family(shannon_multiwavelet(f));
  const FiniteModel window{2, 2};
  std::mt19937_64 rng(3);
  const auto g = random_spectrum_tuple(f, window, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(parseval_residual(family, g, window).residual);
}
BENCHMARK(BM_ParsevalResidual)->Arg(2)->Arg(3)->Arg(5)->Unit(benchmark::kMicrosecond);

void BM_SolveShannon(benchmark::State& state) {
  auto f = field_for(2);
  SolveRequest req;
  req.target = ClopenSet::integers(f);
  req.shell_lo = -static_cast<int>(state.range(0));
  req.shell_hi = static_cast<int>(state.range(0));
  req.max_scale = static_cast<int>(state.range(0)) + 2;
  for (auto _ : state) benchmark::DoNotOptimize(solve_complement(req).status);
}
BENCHMARK(BM_SolveShannon)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
