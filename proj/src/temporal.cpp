#include "accmag/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "accmag/fft.hpp"

namespace accmag::temporal {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool in_band(double f, double f_lo, double f_hi) {
  const double tol = 1e-9 * std::max(1.0, f_hi);
  const double af = std::abs(f);
  return af >= f_lo - tol && af <= f_hi + tol;
}

double bin_frequency(std::size_t m, std::size_t n, double fps) {
  const auto k = m <= n / 2 ? static_cast<double>(m)
                            : static_cast<double>(m) - static_cast<double>(n);
  return k * fps / static_cast<double>(n);
}

std::size_t extend(std::ptrdiff_t i, std::size_t n, Boundary boundary) {
  const auto last = static_cast<std::ptrdiff_t>(n) - 1;
  if (boundary == Boundary::replicate) {
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, last));
  }
  if (last == 0) return 0;
  // Whole-sample mirror: x[-1] = x[1], x[n] = x[n-2].
  const std::ptrdiff_t period = 2 * last;
  i %= period;
  if (i < 0) i += period;
  return static_cast<std::size_t>(i <= last ? i : period - i);
}

}  // namespace

double sigma_from_frequency(double fps, double target_hz) {
  if (!(fps > 0.0) || !(target_hz > 0.0)) {
    throw FilterError("frame rate and target frequency must be positive");
  }
  return fps / (4.0 * target_hz * std::numbers::sqrt2);
}

std::size_t log_radius(double sigma) {
  return static_cast<std::size_t>(std::ceil(4.0 * sigma));
}

TemporalKernel log_kernel(double sigma) {
  if (!(sigma > 0.5) || !std::isfinite(sigma)) {
    throw FilterError("LoG scale must exceed 0.5 frames (got " +
                      std::to_string(sigma) + ")");
  }
  const std::size_t r = log_radius(sigma);
  TemporalKernel k;
  k.sigma = sigma;
  k.center = r;
  k.taps.assign(2 * r + 1, 0.0);
  const double s2 = sigma * sigma;
  const double norm = 1.0 / (std::sqrt(kTwoPi) * sigma);
  for (std::size_t i = 0; i <= r; ++i) {
    const double t = static_cast<double>(i);
    const double v = (t * t / (s2 * s2) - 1.0 / s2) * norm * std::exp(-t * t / (2.0 * s2));
    k.taps[r + i] = v;
    k.taps[r - i] = v;
  }
  // Symmetric pairwise summation keeps the mean exactly symmetric too.
  double sum = k.taps[r];
  for (std::size_t i = 1; i <= r; ++i) sum += 2.0 * k.taps[r + i];
  const double mean = sum / static_cast<double>(k.taps.size());
  for (auto& v : k.taps) v -= mean;
  // Truncation at 4 sigma loses ~1% of the second moment; restore it so the
  // taps differentiate quadratics exactly.
  double m2 = 0.0;
  for (std::size_t i = 1; i <= r; ++i) {
    const double t = static_cast<double>(i);
    m2 += 2.0 * t * t * k.taps[r + i];
  }
  const double gain = 2.0 / m2;
  for (auto& v : k.taps) v *= gain;
  return k;
}

TemporalKernel scaled(TemporalKernel kernel, double factor) {
  for (auto& v : kernel.taps) v *= factor;
  return kernel;
}

void convolve_time(std::span<const double> series, const TemporalKernel& kernel,
                   Boundary boundary, std::span<double> out) {
  const std::size_t n = series.size();
  if (n < kernel.length()) {
    throw FilterError("series of " + std::to_string(n) +
                      " samples is shorter than the " +
                      std::to_string(kernel.length()) + "-tap kernel");
  }
  if (out.size() != n) throw FilterError("output length mismatch");
  const auto c = static_cast<std::ptrdiff_t>(kernel.center);
  const auto len = static_cast<std::ptrdiff_t>(kernel.length());
  const auto nn = static_cast<std::ptrdiff_t>(n);
  for (std::ptrdiff_t t = 0; t < nn; ++t) {
    double acc = 0.0;
    if (t - c >= 0 && t + c < nn && len == 2 * c + 1) {
      const double* x = series.data() + (t + c);
      for (std::ptrdiff_t k = 0; k < len; ++k) acc += kernel.taps[k] * x[-k];
    } else {
      for (std::ptrdiff_t k = 0; k < len; ++k) {
        acc += kernel.taps[k] * series[extend(t + c - k, n, boundary)];
      }
    }
    out[static_cast<std::size_t>(t)] = acc;
  }
}

std::vector<double> convolve_time(std::span<const double> series,
                                  const TemporalKernel& kernel,
                                  Boundary boundary) {
  std::vector<double> out(series.size());
  convolve_time(series, kernel, boundary, out);
  return out;
}

double kernel_gain(const TemporalKernel& kernel, double cycles_per_frame) {
  double acc = 0.0;
  for (std::size_t k = 0; k < kernel.length(); ++k) {
    const double off = static_cast<double>(k) - static_cast<double>(kernel.center);
    acc += kernel.taps[k] * std::cos(kTwoPi * cycles_per_frame * off);
  }
  return acc;
}

void unwrap_phase(std::span<const double> series, std::span<double> out) {
  if (out.size() != series.size()) throw FilterError("output length mismatch");
  if (series.empty()) return;
  double turns = 0.0;
  out[0] = series[0];
  for (std::size_t t = 1; t < series.size(); ++t) {
    const double d = series[t] - series[t - 1];
    double k = std::round(d / kTwoPi);
    // Keep a jump of exactly +pi as +pi rather than -pi.
    if (d - k * kTwoPi == -kPi && d > 0.0) k -= 1.0;
    turns -= k;
    out[t] = series[t] + turns * kTwoPi;
  }
}

std::vector<double> unwrap_phase(std::span<const double> series) {
  std::vector<double> out(series.size());
  unwrap_phase(series, out);
  return out;
}

void validate_band(double f_lo, double f_hi, double fps) {
  if (!(fps > 0.0)) throw FilterError("frame rate must be positive");
  if (!(f_lo >= 0.0) || !(f_lo < f_hi) || f_hi > fps / 2.0 + 1e-12) {
    throw FilterError("invalid band [" + std::to_string(f_lo) + ", " +
                      std::to_string(f_hi) + "] Hz at " + std::to_string(fps) +
                      " fps");
  }
}

std::vector<double> ideal_bandpass(std::span<const double> series, double f_lo,
                                   double f_hi, double fps) {
  validate_band(f_lo, f_hi, fps);
  const std::size_t n = series.size();
  std::vector<Complex> buf(series.begin(), series.end());
  std::vector<Complex> spec(n);
  fft::forward_1d(buf, spec);
  for (std::size_t m = 0; m < n; ++m) {
    if (!in_band(bin_frequency(m, n, fps), f_lo, f_hi)) spec[m] = 0.0;
  }
  fft::inverse_1d(spec, buf);
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = buf[t].real() / static_cast<double>(n);
  return out;
}

TemporalKernel stft_kernel(std::size_t window_len, double f_lo, double f_hi,
                           double fps) {
  validate_band(f_lo, f_hi, fps);
  if (window_len == 0 || window_len % 2 == 0) {
    throw FilterError("STFT window length must be odd (got " +
                      std::to_string(window_len) + ")");
  }
  TemporalKernel k;
  k.center = window_len / 2;
  k.taps.assign(window_len, 0.0);
  const double L = static_cast<double>(window_len);
  for (std::size_t m = 0; m < window_len; ++m) {
    if (!in_band(bin_frequency(m, window_len, fps), f_lo, f_hi)) continue;
    for (std::size_t n = 0; n < window_len; ++n) {
      const double lag = static_cast<double>(k.center) - static_cast<double>(n);
      k.taps[n] += std::cos(kTwoPi * static_cast<double>(m) * lag / L) / L;
    }
  }
  return k;
}

std::vector<double> stft_bandpass(std::span<const double> series,
                                  std::size_t window_len, double f_lo,
                                  double f_hi, double fps) {
  if (window_len > series.size()) {
    throw FilterError("STFT window longer than the series");
  }
  return convolve_time(series, stft_kernel(window_len, f_lo, f_hi, fps),
                       Boundary::replicate);
}

}  // namespace accmag::temporal
