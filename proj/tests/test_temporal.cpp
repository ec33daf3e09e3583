#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "accmag/temporal.hpp"

using namespace accmag::temporal;
using std::numbers::pi;

TEST(Sigma, TableRows) {
  EXPECT_NEAR(sigma_from_frequency(1000, 60), 2.95, 0.005);
  EXPECT_NEAR(sigma_from_frequency(480, 20), 4.24, 0.005);
  EXPECT_NEAR(sigma_from_frequency(60, 2), 5.30, 0.005);
  EXPECT_NEAR(sigma_from_frequency(30, 5), 1.06, 0.005);
}

TEST(Sigma, RejectsNonPositive) {
  EXPECT_THROW(sigma_from_frequency(0, 2), FilterError);
  EXPECT_THROW(sigma_from_frequency(60, 0), FilterError);
}

TEST(LogKernel, ShapeAndMoments) {
  for (double s : {0.6, 1.0, 2.12, 5.3, 8.0}) {
    const auto k = log_kernel(s);
    EXPECT_EQ(k.radius(), static_cast<std::size_t>(std::ceil(4 * s)));
    EXPECT_EQ(k.length(), 2 * k.radius() + 1);
    double m0 = 0, m1 = 0, m2 = 0;
    for (std::size_t i = 0; i < k.length(); ++i) {
      const double t = static_cast<double>(i) - static_cast<double>(k.center);
      m0 += k.taps[i];
      m1 += t * k.taps[i];
      m2 += t * t * k.taps[i];
      EXPECT_EQ(k.taps[i], k.taps[k.length() - 1 - i]);
    }
    EXPECT_NEAR(m0, 0.0, 1e-14);
    EXPECT_NEAR(m1, 0.0, 1e-12);
    EXPECT_NEAR(m2, 2.0, 2e-3);
    EXPECT_LT(k.taps[k.center], 0.0);
  }
}

TEST(LogKernel, RejectsNarrowSigma) {
  EXPECT_THROW(log_kernel(0.5), FilterError);
  EXPECT_THROW(log_kernel(-1.0), FilterError);
}

namespace {

std::vector<double> series(std::size_t n, auto f) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = f(static_cast<double>(i));
  return s;
}

}  // namespace

TEST(LogKernel, AnnihilatesConstantAndRamp) {
  for (double s : {1.0, 2.12, 5.3, 8.0}) {
    const auto k = log_kernel(s);
    const auto c = convolve_time(series(100, [](double) { return 3.7; }), k);
    const auto r = convolve_time(series(100, [](double t) { return 0.25 * t - 4; }), k);
    for (std::size_t t = k.radius(); t + k.radius() < 100; ++t) {
      EXPECT_LT(std::abs(c[t]), 1e-12);
      EXPECT_LT(std::abs(r[t]), 1e-10);
    }
  }
}

TEST(LogKernel, SecondDerivativeOfParabola) {
  for (double s : {1.0, 2.12, 5.3}) {
    const auto k = log_kernel(s);
    const auto y = convolve_time(series(100, [](double t) { return t * t; }), k);
    for (std::size_t t = k.radius(); t + k.radius() < 100; ++t) EXPECT_NEAR(y[t], 2.0, 1e-3);
  }
}

TEST(LogKernel, SinusoidMatchesAnalyticGain) {
  const std::size_t n = 400;
  for (double s : {1.5, 3.0, 5.3}) {
    const auto k = log_kernel(s);
    for (double fs : {0.05, 0.1, 0.2, 0.3}) {
      const double f = fs / s;
      const double expect_gain = -std::pow(2 * pi * f, 2) * std::exp(-2 * pi * pi * f * f * s * s);
      const auto x = series(n, [&](double t) { return std::sin(2 * pi * f * t); });
      const auto y = convolve_time(x, k);
      double peak_err = 0, peak = 0;
      for (std::size_t t = k.radius(); t + k.radius() < n; ++t) {
        peak_err = std::max(peak_err, std::abs(y[t] - expect_gain * x[t]));
        peak = std::max(peak, std::abs(expect_gain * x[t]));
      }
      EXPECT_LT(peak_err, 0.01 * peak) << "sigma " << s << " f*sigma " << fs;
      EXPECT_NEAR(kernel_gain(k, f), expect_gain, 0.01 * std::abs(expect_gain));
    }
  }
}

TEST(Scaled, MultipliesTaps) {
  const auto k = log_kernel(2.0);
  const auto s = scaled(k, -4.0);
  for (std::size_t i = 0; i < k.length(); ++i) EXPECT_EQ(s.taps[i], -4.0 * k.taps[i]);
  EXPECT_EQ(s.center, k.center);
}

TEST(Convolve, DeltaGivesTaps) {
  const auto k = log_kernel(2.0);
  std::vector<double> d(41, 0.0);
  d[20] = 1.0;
  const auto y = convolve_time(d, k);
  for (std::size_t i = 0; i < k.length(); ++i) {
    EXPECT_EQ(y[20 - k.center + i], k.taps[k.length() - 1 - i]);
  }
}

TEST(Convolve, ZeroAndBoundaries) {
  const auto k = log_kernel(2.0);
  for (auto b : {Boundary::replicate, Boundary::reflect}) {
    for (double v : convolve_time(std::vector<double>(30, 0.0), k, b)) EXPECT_EQ(v, 0.0);
  }
  for (double v : convolve_time(std::vector<double>(30, 0.8), k, Boundary::replicate)) {
    EXPECT_LT(std::abs(v), 1e-15);
  }
}

TEST(Convolve, ReflectMirrorsWholeSample) {
  TemporalKernel shift{{0.0, 0.0, 1.0}, 1, 0.0};  // y[t] = x[t-1]
  const std::vector<double> x{5, 6, 7, 8};
  EXPECT_EQ(convolve_time(x, shift, Boundary::reflect), (std::vector<double>{6, 5, 6, 7}));
  EXPECT_EQ(convolve_time(x, shift, Boundary::replicate), (std::vector<double>{5, 5, 6, 7}));
}

TEST(Convolve, RejectsShortSeries) {
  EXPECT_THROW(convolve_time(std::vector<double>(10, 0.0), log_kernel(2.0)), FilterError);
}

TEST(Unwrap, Examples) {
  const auto u = unwrap_phase(std::vector<double>{pi - 0.1, -pi + 0.1});
  EXPECT_DOUBLE_EQ(u[0], pi - 0.1);
  EXPECT_NEAR(u[1], pi + 0.1, 1e-15);
  const std::vector<double> smooth{0.1, 0.5, 1.2, 0.3, -1.0, -2.0};
  EXPECT_EQ(unwrap_phase(smooth), smooth);
}

TEST(Unwrap, RecoversLinearPhase) {
  std::vector<double> wrapped(200);
  for (std::size_t t = 0; t < wrapped.size(); ++t) {
    wrapped[t] = std::remainder(0.4 * static_cast<double>(t), 2 * pi);
  }
  const auto u = unwrap_phase(wrapped);
  for (std::size_t t = 0; t < u.size(); ++t) {
    EXPECT_NEAR(u[t], 0.4 * static_cast<double>(t), 1e-12);
    const double turns = (u[t] - wrapped[t]) / (2 * pi);
    EXPECT_NEAR(turns, std::round(turns), 1e-12);
  }
}

TEST(Ideal, SingleBinPassesThrough) {
  const auto x = series(120, [](double t) { return std::sin(2 * pi * 2 * t / 60); });
  const auto y = ideal_bandpass(x, 1.5, 2.5, 60);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], x[i], 1e-9);
}

TEST(Ideal, ConstantRemovedAndComponentIsolated) {
  for (double v : ideal_bandpass(std::vector<double>(90, 0.3), 1.5, 2.5, 60)) {
    EXPECT_NEAR(v, 0.0, 1e-12);
  }
  const auto x = series(120, [](double t) {
    return std::sin(2 * pi * t / 60) + std::sin(2 * pi * 2 * t / 60);
  });
  const auto y = ideal_bandpass(x, 1.5, 2.5, 60);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_NEAR(y[i], std::sin(2 * pi * 2 * static_cast<double>(i) / 60), 1e-9);
  }
}

TEST(Ideal, RejectsBadBand) {
  const std::vector<double> x(60, 0.0);
  EXPECT_THROW(ideal_bandpass(x, 2.5, 1.5, 60), FilterError);
  EXPECT_THROW(ideal_bandpass(x, -1, 1.5, 60), FilterError);
  EXPECT_THROW(ideal_bandpass(x, 1, 31, 60), FilterError);
}

namespace {

// Centre sample of an ideal band-pass computed with a direct DFT over the
// window [t-c, t+c], replicate-extended.
std::vector<double> stft_oracle(const std::vector<double>& x, std::size_t L, double lo,
                                double hi, double fps) {
  const auto n = static_cast<long>(x.size());
  const long c = static_cast<long>(L / 2);
  std::vector<double> out(x.size());
  for (long t = 0; t < n; ++t) {
    std::vector<double> w(L);
    for (long j = 0; j < static_cast<long>(L); ++j) {
      w[j] = x[std::clamp(t - c + j, 0L, n - 1)];
    }
    double acc = 0;
    for (std::size_t m = 0; m < L; ++m) {
      const double f = std::min<double>(m, L - m) * fps / L;
      if (f < lo - 1e-9 || f > hi + 1e-9) continue;
      std::complex<double> X = 0;
      for (std::size_t j = 0; j < L; ++j) {
        X += w[j] * std::polar(1.0, -2 * pi * m * j / L);
      }
      acc += (X * std::polar(1.0, 2 * pi * m * c / L)).real() / L;
    }
    out[t] = acc;
  }
  return out;
}

}  // namespace

TEST(Stft, MatchesPerWindowDft) {
  const auto x = series(120, [](double t) { return std::sin(2 * pi * 2 * t / 60) + 0.1 * t; });
  for (std::size_t L : {5u, 15u, 25u, 31u}) {
    const auto y = stft_bandpass(x, L, 1.5, 2.5, 60);
    const auto o = stft_oracle(x, L, 1.5, 2.5, 60);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], o[i], 1e-9) << L;
  }
}

TEST(Stft, FifteenTapAttenuation) {
  const auto x = series(240, [](double t) { return std::sin(2 * pi * 2 * t / 60); });
  const auto y = stft_bandpass(x, 15, 1.5, 2.5, 60);
  const auto o = stft_oracle(x, 15, 1.5, 2.5, 60);
  for (std::size_t i = 7; i + 7 < x.size(); ++i) EXPECT_NEAR(y[i], o[i], 1e-9);
}

TEST(Stft, FullWindowEqualsIdealAtCentre) {
  const auto x = series(61, [](double t) { return std::cos(0.3 * t) + 0.02 * t * t; });
  const auto y = stft_bandpass(x, 61, 1.5, 2.5, 60);
  const auto ideal = ideal_bandpass(x, 1.5, 2.5, 60);
  EXPECT_NEAR(y[30], ideal[30], 1e-9);
}

TEST(Stft, ConvergesToIdeal) {
  const auto x = series(101, [](double t) { return std::sin(2 * pi * 2.1 * t / 60) + std::cos(0.05 * t); });
  const auto ideal = ideal_bandpass(x, 1.5, 2.5, 60);
  double prev = 1e9;
  for (std::size_t L : {41u, 61u, 81u, 101u}) {
    const double err = std::abs(stft_bandpass(x, L, 1.5, 2.5, 60)[50] - ideal[50]);
    EXPECT_LE(err, prev + 1e-3);
    prev = err;
  }
  EXPECT_LT(prev, 1e-9);
}

TEST(Stft, ConstantToZeroAndBadWindow) {
  for (double v : stft_bandpass(std::vector<double>(50, 0.4), 15, 1.5, 2.5, 60)) {
    EXPECT_NEAR(v, 0.0, 1e-12);
  }
  EXPECT_THROW(stft_kernel(14, 1.5, 2.5, 60), FilterError);
  EXPECT_THROW(stft_bandpass(std::vector<double>(10, 0.0), 15, 1.5, 2.5, 60), FilterError);
}
