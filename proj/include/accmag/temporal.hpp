#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace accmag::temporal {

class FilterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Boundary { replicate, reflect };

/// Discrete 1-D filter applied along time. taps[center] is the zero offset.
struct TemporalKernel {
  std::vector<double> taps;
  std::size_t center = 0;
  double sigma = 0.0;

  std::size_t length() const { return taps.size(); }
  std::size_t radius() const { return center; }
};

/// Observation scale (in frames) of the acceleration filter for a change at
/// `target_hz` in a video sampled at `fps`: fps / (4 * target_hz * sqrt(2)).
double sigma_from_frequency(double fps, double target_hz);

/// Radius ceil(4 sigma) of the truncated Gaussian-derivative kernel.
std::size_t log_radius(double sigma);

/// Samples d^2/dt^2 of a unit-mass Gaussian at integer offsets in
/// [-ceil(4 sigma), ceil(4 sigma)], mirrored so the taps are exactly
/// symmetric, then shifted to zero mean so constants and ramps are
/// annihilated, and rescaled so that sum taps[k] * k^2 = 2.
TemporalKernel log_kernel(double sigma);

/// Same taps multiplied by `factor` (e.g. -sigma^2 for the scale-normalized,
/// sign-flipped response).
TemporalKernel scaled(TemporalKernel kernel, double factor);

/// out[t] = sum_k taps[k] * x[t - (k - center)], with out-of-range samples
/// taken from the boundary extension. Output length equals input length.
std::vector<double> convolve_time(std::span<const double> series,
                                  const TemporalKernel& kernel,
                                  Boundary boundary = Boundary::replicate);
void convolve_time(std::span<const double> series, const TemporalKernel& kernel,
                   Boundary boundary, std::span<double> out);

/// Frequency response sum_k taps[k] e^{-i 2 pi f (k - center)} of a symmetric
/// kernel (real) at `cycles_per_frame`.
double kernel_gain(const TemporalKernel& kernel, double cycles_per_frame);

/// Removes 2*pi jumps: out[0] = in[0], |out[t+1] - out[t]| <= pi and
/// out[t] - in[t] is an exact multiple of 2*pi.
std::vector<double> unwrap_phase(std::span<const double> series);
void unwrap_phase(std::span<const double> series, std::span<double> out);

/// Keeps the DFT bins of the whole series whose |frequency| lies in
/// [f_lo, f_hi] Hz and returns the real part of the inverse transform.
std::vector<double> ideal_bandpass(std::span<const double> series, double f_lo,
                                   double f_hi, double fps);

/// Equivalent FIR taps of a length-`window_len` STFT band-pass that keeps
/// the centre sample: h[n] = (1/L) sum_{m in band} cos(2 pi m (c - n) / L).
/// Returned as a TemporalKernel so it runs through convolve_time.
TemporalKernel stft_kernel(std::size_t window_len, double f_lo, double f_hi,
                           double fps);

/// Sliding rectangular window, hop 1: each output is the centre sample of
/// an ideal band-pass applied inside the window around it. Replicate
/// extension at the ends.
std::vector<double> stft_bandpass(std::span<const double> series,
                                  std::size_t window_len, double f_lo,
                                  double f_hi, double fps);

void validate_band(double f_lo, double f_hi, double fps);

}  // namespace accmag::temporal
