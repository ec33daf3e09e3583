#include <benchmark/benchmark.h>

#include <random>

#include "accmag/kernels.hpp"
#include "accmag/magnify.hpp"
#include "accmag/synth.hpp"

using namespace accmag;
using namespace accmag::kernels;

namespace {

constexpr std::size_t kFrames = 120;

RealStack real_stack(std::size_t samples) {
  RealStack s(kFrames, samples);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u;
  for (auto& v : s.data) v = u(rng);
  return s;
}

ComplexStack complex_stack(std::size_t samples) {
  ComplexStack s(kFrames, samples);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (auto& v : s.data) v = {g(rng), g(rng)};
  return s;
}

Exec exec_of(const benchmark::State& state) {
  return state.range(1) ? Exec::parallel : Exec::serial;
}

void set_label(benchmark::State& state) {
  state.SetLabel(state.range(1) ? "parallel" : "serial");
}

void BM_FilterSeries(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto in = real_stack(n);
  RealStack out(kFrames, n);
  const auto k = temporal::log_kernel(5.3);
  SeriesFilter f = [&](std::span<const double> a, std::span<double> b) {
    temporal::convolve_time(a, k, temporal::Boundary::replicate, b);
  };
  for (auto _ : state) {
    filter_series(in, out, f, exec_of(state));
    benchmark::DoNotOptimize(out.data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * kFrames));
  set_label(state);
}

void BM_FilteredPhase(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto band = complex_stack(n);
  RealStack out(kFrames, n);
  const auto k = temporal::log_kernel(5.3);
  for (auto _ : state) {
    filtered_phase(band, k, temporal::Boundary::replicate, out, exec_of(state));
    benchmark::DoNotOptimize(out.data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * kFrames));
  set_label(state);
}

void BM_PhaseShiftDelta(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto band = complex_stack(n);
  const auto resp = real_stack(n);
  for (auto _ : state) {
    auto work = band;
    phase_shift_delta(work, resp, 8.0, exec_of(state));
    benchmark::DoNotOptimize(work.data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * kFrames));
  set_label(state);
}

void BM_ColorPipeline(benchmark::State& state) {
  synth::BallSpec spec;
  spec.height = spec.width = static_cast<std::size_t>(state.range(0));
  spec.radius = 6;
  spec.duration_frames = 60;
  const auto ball = synth::render_ball(spec);
  magnify::MagnifyConfig cfg;
  cfg.mode = magnify::Mode::color;
  cfg.alpha = 8;
  cfg.target_freq_hz = 2;
  cfg.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(magnify::magnify(ball, cfg).samples().data());
  set_label(state);
}

void BM_MotionPipeline(benchmark::State& state) {
  synth::BallSpec spec;
  spec.height = spec.width = static_cast<std::size_t>(state.range(0));
  spec.radius = 6;
  spec.duration_frames = 48;
  spec.fps = 30;
  const auto ball = synth::render_ball(spec);
  magnify::MagnifyConfig cfg;
  cfg.mode = magnify::Mode::motion;
  cfg.alpha = 8;
  cfg.target_freq_hz = 2;
  cfg.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(magnify::magnify(ball, cfg).samples().data());
  set_label(state);
}

}  // namespace

BENCHMARK(BM_FilterSeries)->ArgsProduct({{4096, 65536}, {0, 1}});
BENCHMARK(BM_FilteredPhase)->ArgsProduct({{4096, 65536}, {0, 1}});
BENCHMARK(BM_PhaseShiftDelta)->ArgsProduct({{4096, 65536}, {0, 1}});
BENCHMARK(BM_ColorPipeline)->ArgsProduct({{128}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MotionPipeline)->ArgsProduct({{64}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
