#include <algorithm>
#include <cmath>
#include <random>

#include <benchmark/benchmark.h>

#include "evsynth/simulator.hpp"
#include "evsynth/timing.hpp"

namespace {

using namespace evsynth;

sim::FrameSequence random_walk(std::uint32_t w, std::uint32_t h, std::size_t n) {
  std::mt19937 gen(1);
  std::uniform_real_distribution<float> start(0.02f, 1.0f);
  std::normal_distribution<float> step(0.0f, 0.4f);
  std::vector<float> level(std::size_t{w} * h);
  for (float& v : level) v = start(gen);
  sim::FrameSequence seq;
  for (std::size_t i = 0; i < n; ++i) {
    seq.frames.push_back({w, h, level, i * frame_period_us(kDefaultFps)});
    for (float& v : level) v = std::clamp(v * std::exp(step(gen)), 0.001f, 1.0f);
  }
  return seq;
}

void run(benchmark::State& state, const sim::Backend& backend) {
  const auto seq = random_walk(640, 480, 4);
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::simulate(seq, backend, 7, {threads}));
  }
  state.counters["pixel_intervals/s"] = benchmark::Counter(
      640.0 * 480.0 * 3.0 * static_cast<double>(state.iterations()), benchmark::Counter::kIsRate);
}

void BM_SimulateVoltmeter(benchmark::State& state) { run(state, events::VoltmeterParams{}); }
void BM_SimulateIdeal(benchmark::State& state) { run(state, events::IdealParams{0.3, 0.3}); }

}  // namespace

BENCHMARK(BM_SimulateVoltmeter)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SimulateIdeal)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
