#include <benchmark/benchmark.h>

#include <random>

#include "idt/miner.hpp"

namespace {

idt::Batch random_batch(std::size_t n, std::size_t dim) {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> normal(0.0, 0.1);
  idt::Batch b;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (double& x : v) x = normal(gen);
    b.embeddings.push_back({v, 1});
    b.labels.push_back(static_cast<idt::Label>(i / 3));
    b.roles.push_back(idt::Role::Mwe);
  }
  return b;
}

void BM_Mine(benchmark::State& state) {
  const auto b = random_batch(static_cast<std::size_t>(state.range(0)), 32);
  for (auto _ : state) benchmark::DoNotOptimize(idt::mine(b, 0.4));
}
BENCHMARK(BM_Mine)->Arg(16)->Arg(64)->Arg(128);

}  // namespace
