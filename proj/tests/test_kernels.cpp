#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <random>

#include "accmag/kernels.hpp"
#include "accmag/pyramid.hpp"

using namespace accmag;
using namespace accmag::kernels;

namespace {

ComplexStack random_band(std::size_t t, std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexStack s(t, n);
  for (auto& c : s.data) c = {g(rng), g(rng)};
  return s;
}

class ThreadGuard {
 public:
  explicit ThreadGuard(int n) : saved_(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadGuard() { omp_set_num_threads(saved_); }

 private:
  int saved_;
};

}  // namespace

TEST(Kernels, FilterSeriesSerialEqualsParallel) {
  RealStack in(50, 333);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u;
  for (auto& v : in.data) v = u(rng);
  const auto k = temporal::log_kernel(2.12);
  SeriesFilter f = [&](std::span<const double> a, std::span<double> b) {
    temporal::convolve_time(a, k, temporal::Boundary::replicate, b);
  };
  RealStack s(50, 333), p(50, 333);
  filter_series_serial(in, s, f);
  for (int threads : {1, 3}) {
    ThreadGuard g(threads);
    filter_series_parallel(in, p, f);
    EXPECT_EQ(s.data, p.data);
  }
  // Column 17 equals the direct convolution of that series.
  std::vector<double> col(50);
  for (std::size_t t = 0; t < 50; ++t) col[t] = in(t, 17);
  const auto ref = temporal::convolve_time(col, k);
  for (std::size_t t = 0; t < 50; ++t) EXPECT_EQ(s(t, 17), ref[t]);
}

TEST(Kernels, FilteredPhaseSerialEqualsParallel) {
  const auto band = random_band(40, 257, 2);
  const auto k = temporal::log_kernel(1.77);
  RealStack s(40, 257), p(40, 257);
  filtered_phase_serial(band, k, temporal::Boundary::replicate, s);
  for (int threads : {1, 3}) {
    ThreadGuard g(threads);
    filtered_phase_parallel(band, k, temporal::Boundary::replicate, p);
    EXPECT_EQ(s.data, p.data);
  }
}

TEST(Kernels, FilteredPhaseOfLinearPhaseIsZero) {
  ComplexStack band(60, 3);
  for (std::size_t t = 0; t < 60; ++t) {
    for (std::size_t i = 0; i < 3; ++i) {
      band(t, i) = std::polar(0.5 + i, 0.3 + (1.1 + i) * double(t));
    }
  }
  const auto k = temporal::log_kernel(2.0);
  RealStack out(60, 3);
  filtered_phase(band, k, temporal::Boundary::replicate, out, Exec::parallel);
  for (std::size_t t = k.radius(); t + k.radius() < 60; ++t) {
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(std::abs(out(t, i)), 1e-9);
  }
}

TEST(Kernels, PhaseShiftDeltaSerialEqualsParallel) {
  const auto band = random_band(20, 101, 3);
  RealStack resp(20, 101);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (auto& v : resp.data) v = g(rng);
  auto s = band;
  auto p = band;
  phase_shift_delta_serial(s, resp, 6.0);
  {
    ThreadGuard tg(3);
    phase_shift_delta_parallel(p, resp, 6.0);
  }
  EXPECT_EQ(s.data, p.data);
  const auto shifted = phase_shifted(band, resp, 6.0);
  for (std::size_t i = 0; i < band.data.size(); ++i) {
    EXPECT_NEAR(std::abs(band.data[i] + s.data[i] - shifted.data[i]), 0.0, 1e-12);
  }
}

TEST(Kernels, PhaseShiftPreservesAmplitude) {
  const auto band = random_band(10, 64, 5);
  RealStack resp(10, 64);
  for (std::size_t i = 0; i < resp.data.size(); ++i) resp.data[i] = 0.01 * double(i);
  const auto shifted = phase_shifted(band, resp, 20.0);
  for (std::size_t i = 0; i < band.data.size(); ++i) {
    EXPECT_NEAR(std::abs(shifted.data[i]), std::abs(band.data[i]), 1e-12);
  }
  auto zero = band;
  phase_shift_delta(zero, RealStack(10, 64), 20.0, Exec::serial);
  for (const auto& c : zero.data) EXPECT_EQ(std::abs(c), 0.0);
}

TEST(Kernels, ShapeMismatch) {
  RealStack a(3, 4), b(3, 5);
  SeriesFilter f = [](std::span<const double>, std::span<double>) {};
  EXPECT_THROW(filter_series(a, b, f, Exec::serial), std::invalid_argument);
}
