#include <benchmark/benchmark.h>

#include <random>

#include "spencer/catalog.hpp"
#include "spencer/exactla.hpp"
#include "spencer/symbolic.hpp"

using namespace spencer;

namespace {

std::vector<SparseVec> random_rows(std::size_t rows, std::size_t cols, unsigned density, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::vector<SparseVec> out(rows);
  for (auto& r : out) {
    std::vector<std::pair<std::uint32_t, Rational>> t;
    for (std::uint32_t c = 0; c < cols; ++c)
      if (gen() % 100 < density) t.emplace_back(c, Rational(static_cast<long>(gen() % 19) - 9));
    r = combine(std::move(t));
  }
  return out;
}

// Rows of the Spencer differential on a prolonged symplectic symbol.
std::vector<SparseVec> delta_rows(int l) {
  Subspace g = catalog::symbol(catalog::PseudogroupSpec::parse("symplectic:2n=4"), l);
  LinearMap d = delta_map(g.ambient());
  std::vector<SparseVec> rows;
  for (const auto& v : g.basis()) rows.push_back(d.apply(v));
  return rows;
}

void BM_rref_random(benchmark::State& st) {
  auto rows = random_rows(st.range(0), st.range(0), 10, 1);
  for (auto _ : st) benchmark::DoNotOptimize(rref(rows, st.range(0)));
}

void BM_rref_serial_random(benchmark::State& st) {
  auto rows = random_rows(st.range(0), st.range(0), 10, 1);
  for (auto _ : st) benchmark::DoNotOptimize(rref_serial(rows, st.range(0)));
}

void BM_rref_delta(benchmark::State& st) {
  auto rows = delta_rows(static_cast<int>(st.range(0)));
  std::size_t ncols = delta_map(catalog::symbol(catalog::PseudogroupSpec::parse("symplectic:2n=4"),
                                                static_cast<int>(st.range(0)))
                                    .ambient())
                          .codomain.dim();
  for (auto _ : st) benchmark::DoNotOptimize(rref(rows, ncols));
}

void BM_rref_serial_delta(benchmark::State& st) {
  auto rows = delta_rows(static_cast<int>(st.range(0)));
  std::size_t ncols = delta_map(catalog::symbol(catalog::PseudogroupSpec::parse("symplectic:2n=4"),
                                                static_cast<int>(st.range(0)))
                                    .ambient())
                          .codomain.dim();
  for (auto _ : st) benchmark::DoNotOptimize(rref_serial(rows, ncols));
}

}  // namespace

BENCHMARK(BM_rref_random)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rref_serial_random)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rref_delta)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rref_serial_delta)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
