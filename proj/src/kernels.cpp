#include "accmag/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "accmag/pyramid.hpp"

namespace accmag::kernels {
namespace {

template <typename A, typename B>
void require_same(const TimeStack<A>& a, const TimeStack<B>& b) {
  if (a.frames != b.frames || a.samples != b.samples) {
    throw std::invalid_argument("time stacks differ in shape");
  }
}

void gather(const RealStack& s, std::size_t i, std::span<double> out) {
  for (std::size_t t = 0; t < s.frames; ++t) out[t] = s(t, i);
}

void scatter(std::span<const double> in, std::size_t i, RealStack& s) {
  for (std::size_t t = 0; t < s.frames; ++t) s(t, i) = in[t];
}

void phase_series(const ComplexStack& s, std::size_t i, std::span<double> out) {
  for (std::size_t t = 0; t < s.frames; ++t) out[t] = pyramid::wrapped_phase(s(t, i));
}

// exp(i x) - 1 without cancellation for small x.
Complex expm1_i(double x) {
  const double h = std::sin(0.5 * x);
  return {-2.0 * h * h, std::sin(x)};
}

}  // namespace

void filter_series_serial(const RealStack& in, RealStack& out,
                          const SeriesFilter& filter) {
  require_same(in, out);
  std::vector<double> a(in.frames), b(in.frames);
  for (std::size_t i = 0; i < in.samples; ++i) {
    gather(in, i, a);
    filter(a, b);
    scatter(b, i, out);
  }
}

void filter_series_parallel(const RealStack& in, RealStack& out,
                            const SeriesFilter& filter) {
  require_same(in, out);
  const auto n = static_cast<std::ptrdiff_t>(in.samples);
#pragma omp parallel
  {
    std::vector<double> a(in.frames), b(in.frames);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      gather(in, static_cast<std::size_t>(i), a);
      filter(a, b);
      scatter(b, static_cast<std::size_t>(i), out);
    }
  }
}

void filter_series(const RealStack& in, RealStack& out,
                   const SeriesFilter& filter, Exec exec) {
  if (exec == Exec::serial) {
    filter_series_serial(in, out, filter);
  } else {
    filter_series_parallel(in, out, filter);
  }
}

void filtered_phase_serial(const ComplexStack& band,
                           const temporal::TemporalKernel& kernel,
                           temporal::Boundary boundary, RealStack& out) {
  require_same(band, out);
  std::vector<double> wrapped(band.frames), unwrapped(band.frames),
      response(band.frames);
  for (std::size_t i = 0; i < band.samples; ++i) {
    phase_series(band, i, wrapped);
    temporal::unwrap_phase(wrapped, unwrapped);
    temporal::convolve_time(unwrapped, kernel, boundary, response);
    scatter(response, i, out);
  }
}

void filtered_phase_parallel(const ComplexStack& band,
                             const temporal::TemporalKernel& kernel,
                             temporal::Boundary boundary, RealStack& out) {
  require_same(band, out);
  const auto n = static_cast<std::ptrdiff_t>(band.samples);
#pragma omp parallel
  {
    std::vector<double> wrapped(band.frames), unwrapped(band.frames),
        response(band.frames);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      phase_series(band, idx, wrapped);
      temporal::unwrap_phase(wrapped, unwrapped);
      temporal::convolve_time(unwrapped, kernel, boundary, response);
      scatter(response, idx, out);
    }
  }
}

void filtered_phase(const ComplexStack& band,
                    const temporal::TemporalKernel& kernel,
                    temporal::Boundary boundary, RealStack& out, Exec exec) {
  if (exec == Exec::serial) {
    filtered_phase_serial(band, kernel, boundary, out);
  } else {
    filtered_phase_parallel(band, kernel, boundary, out);
  }
}

void phase_shift_delta_serial(ComplexStack& band, const RealStack& response,
                              double alpha) {
  require_same(band, response);
  for (std::size_t i = 0; i < band.data.size(); ++i) {
    band.data[i] *= expm1_i(alpha * response.data[i]);
  }
}

void phase_shift_delta_parallel(ComplexStack& band, const RealStack& response,
                                double alpha) {
  require_same(band, response);
  const auto n = static_cast<std::ptrdiff_t>(band.data.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    band.data[static_cast<std::size_t>(i)] *=
        expm1_i(alpha * response.data[static_cast<std::size_t>(i)]);
  }
}

void phase_shift_delta(ComplexStack& band, const RealStack& response,
                       double alpha, Exec exec) {
  if (exec == Exec::serial) {
    phase_shift_delta_serial(band, response, alpha);
  } else {
    phase_shift_delta_parallel(band, response, alpha);
  }
}

ComplexStack phase_shifted(const ComplexStack& band, const RealStack& response,
                           double alpha) {
  require_same(band, response);
  ComplexStack out(band.frames, band.samples);
  for (std::size_t i = 0; i < band.data.size(); ++i) {
    const Complex c = band.data[i];
    out.data[i] = std::polar(std::abs(c),
                             pyramid::wrapped_phase(c) + alpha * response.data[i]);
  }
  return out;
}

}  // namespace accmag::kernels
