#pragma once

// Data-parallel inner loops of the pipelines. Every kernel has a serial
// reference and an OpenMP version; both produce bit-identical results for
// any thread count because each output element is computed by exactly one
// iteration with a fixed operation order.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "accmag/grid.hpp"
#include "accmag/temporal.hpp"

namespace accmag::kernels {

enum class Exec { serial, parallel };

/// frames x samples values, frame-major (one row per frame).
template <typename T>
struct TimeStack {
  std::size_t frames = 0;
  std::size_t samples = 0;
  std::vector<T> data;

  TimeStack() = default;
  TimeStack(std::size_t t, std::size_t n) : frames(t), samples(n), data(t * n) {}

  std::span<T> row(std::size_t t) { return std::span<T>(data).subspan(t * samples, samples); }
  std::span<const T> row(std::size_t t) const {
    return std::span<const T>(data).subspan(t * samples, samples);
  }
  T& operator()(std::size_t t, std::size_t i) { return data[t * samples + i]; }
  const T& operator()(std::size_t t, std::size_t i) const { return data[t * samples + i]; }
};

using RealStack = TimeStack<double>;
using ComplexStack = TimeStack<Complex>;

/// Maps one time series (length = frames) to another of equal length.
using SeriesFilter =
    std::function<void(std::span<const double> in, std::span<double> out)>;

/// out(:, i) = filter(in(:, i)) for every sample i.
void filter_series_serial(const RealStack& in, RealStack& out,
                          const SeriesFilter& filter);
void filter_series_parallel(const RealStack& in, RealStack& out,
                            const SeriesFilter& filter);
void filter_series(const RealStack& in, RealStack& out,
                   const SeriesFilter& filter, Exec exec);

/// Temporal response of the unwrapped phase of each coefficient series.
void filtered_phase_serial(const ComplexStack& band,
                           const temporal::TemporalKernel& kernel,
                           temporal::Boundary boundary, RealStack& out);
void filtered_phase_parallel(const ComplexStack& band,
                             const temporal::TemporalKernel& kernel,
                             temporal::Boundary boundary, RealStack& out);
void filtered_phase(const ComplexStack& band,
                    const temporal::TemporalKernel& kernel,
                    temporal::Boundary boundary, RealStack& out, Exec exec);

/// band <- band * (exp(i * alpha * response) - 1), the change a phase shift
/// of alpha * response makes to each coefficient. Amplitudes are untouched
/// by the shift itself.
void phase_shift_delta_serial(ComplexStack& band, const RealStack& response,
                              double alpha);
void phase_shift_delta_parallel(ComplexStack& band, const RealStack& response,
                                double alpha);
void phase_shift_delta(ComplexStack& band, const RealStack& response,
                       double alpha, Exec exec);

/// band * exp(i * alpha * response): the magnified coefficients themselves.
ComplexStack phase_shifted(const ComplexStack& band, const RealStack& response,
                           double alpha);

}  // namespace accmag::kernels
