#include <benchmark/benchmark.h>

#include "cts/hda.hpp"
#include "cts/machine.hpp"

using namespace cts;

namespace {

// k x k grid of a-edges (right) and b-edges (down), filled up to dimension 3.
Hda grid(int k) {
  LabeledGraph g;
  g.alphabet = Alphabet({"a", "b"});
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) g.graph.add_vertex("v" + std::to_string(r) + "_" + std::to_string(c));
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) {
      int v = r * k + c;
      if (c + 1 < k) {
        g.graph.add_edge(v, v + 1);
        g.labels.push_back(*g.alphabet.find("a"));
      }
      if (r + 1 < k) {
        g.graph.add_edge(v, v + k);
        g.labels.push_back(*g.alphabet.find("b"));
      }
    }
  return sigma_coskeleton(hda_of_graph(g), 1, 3);
}

cip::Machine parallel_machine(int n) {
  const char* text =
      "context x:nat, z:nat; program x := 5; while x > 0 do x := x - 1; p!(x + x) end "
      "<< p ~ q >> while z < 100 do q?z end end";
  return cip::Machine(cip::typecheck(cip::parse_program(text)), cip::Interp{n});
}

void BM_KernelParallel(benchmark::State& st) {
  Hda h = grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(cubical_kernel(h.carrier, 2));
}

void BM_KernelSerial(benchmark::State& st) {
  Hda h = grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(cubical_kernel_serial(h.carrier, 2));
}

void BM_ExploreParallel(benchmark::State& st) {
  cip::Machine m = parallel_machine(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(cip::explore(m));
}

void BM_ExploreSerial(benchmark::State& st) {
  cip::Machine m = parallel_machine(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(cip::explore_serial(m));
}

}  // namespace

BENCHMARK(BM_KernelParallel)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelSerial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExploreParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExploreSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
