#include "accmag/magnify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "accmag/fft.hpp"
#include "accmag/videoio.hpp"

namespace accmag::magnify {

using kernels::ComplexStack;
using kernels::Exec;
using kernels::RealStack;

std::string TemporalFilterSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::acceleration:
      os << "acceleration";
      break;
    case Kind::ideal_bandpass:
      os << "ideal:" << f_lo << ',' << f_hi;
      break;
    case Kind::stft:
      os << "stft:" << window << ',' << f_lo << ',' << f_hi;
      break;
  }
  return os.str();
}

double MagnifyConfig::sigma(double rate) const {
  if (sigma_override) return *sigma_override;
  return temporal::sigma_from_frequency(rate, target_freq_hz);
}

double resolve_fps(const FrameSequence& seq, const MagnifyConfig& cfg) {
  return cfg.fps > 0.0 ? cfg.fps : seq.fps();
}

temporal::TemporalKernel acceleration_kernel(const MagnifyConfig& cfg, double fps) {
  const double sigma = cfg.sigma(fps);
  auto k = temporal::log_kernel(sigma);
  if (cfg.kernel_scaling == KernelScaling::normalized) {
    k = temporal::scaled(std::move(k), -sigma * sigma);
  }
  return k;
}

kernels::SeriesFilter make_series_filter(const MagnifyConfig& cfg, double fps,
                                         std::size_t frames) {
  const auto& f = cfg.temporal_filter;
  switch (f.kind) {
    case TemporalFilterSpec::Kind::acceleration: {
      auto k = acceleration_kernel(cfg, fps);
      if (k.length() > frames) {
        throw PipelineError("video of " + std::to_string(frames) +
                            " frames is shorter than the " +
                            std::to_string(k.length()) +
                            "-tap acceleration kernel (sigma " +
                            std::to_string(k.sigma) + ")");
      }
      return [k = std::move(k), b = cfg.boundary](std::span<const double> in,
                                                  std::span<double> out) {
        temporal::convolve_time(in, k, b, out);
      };
    }
    case TemporalFilterSpec::Kind::ideal_bandpass: {
      temporal::validate_band(f.f_lo, f.f_hi, fps);
      return [lo = f.f_lo, hi = f.f_hi, fps](std::span<const double> in,
                                             std::span<double> out) {
        const auto r = temporal::ideal_bandpass(in, lo, hi, fps);
        std::copy(r.begin(), r.end(), out.begin());
      };
    }
    case TemporalFilterSpec::Kind::stft: {
      if (f.window > frames) {
        throw PipelineError("STFT window longer than the video");
      }
      auto k = temporal::stft_kernel(f.window, f.f_lo, f.f_hi, fps);
      return [k = std::move(k)](std::span<const double> in, std::span<double> out) {
        temporal::convolve_time(in, k, temporal::Boundary::replicate, out);
      };
    }
  }
  throw PipelineError("unknown temporal filter");
}

FrameSequence add_yiq_delta(const FrameSequence& input, const FrameSequence& delta) {
  if (!input.same_shape(delta) || input.channels() != 3) {
    throw ShapeError("delta does not match the input sequence");
  }
  FrameSequence out = input;
  auto dst = out.samples();
  const auto src = delta.samples();
  const bool to_rgb = input.colorspace() == Colorspace::rgb;
  const auto& m = videoio::yiq_to_rgb_matrix();
  const auto pixels = static_cast<std::ptrdiff_t>(src.size() / 3);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < pixels; ++p) {
    const std::size_t o = static_cast<std::size_t>(p) * 3;
    std::array<double, 3> d{src[o], src[o + 1], src[o + 2]};
    if (to_rgb) d = videoio::apply(m, d);
    dst[o] += d[0];
    dst[o + 1] += d[1];
    dst[o + 2] += d[2];
  }
  return out;
}

namespace {

FrameSequence as_yiq(const FrameSequence& seq) {
  if (seq.channels() != 3) {
    throw ShapeError("magnification expects 3-channel RGB or YIQ input");
  }
  return seq.colorspace() == Colorspace::yiq ? seq : videoio::rgb_to_yiq(seq);
}

std::size_t channel_count(Channels ch) { return ch == Channels::luma_only ? 1 : 3; }

std::vector<double> gaussian_taps(double sigma) {
  const auto r = static_cast<std::size_t>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * r + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const double x = static_cast<double>(i) - static_cast<double>(r);
    taps[i] = std::exp(-x * x / (2.0 * sigma * sigma));
    sum += taps[i];
  }
  for (auto& v : taps) v /= sum;
  return taps;
}

void blur(std::span<double> g, std::size_t h, std::size_t w,
          const std::vector<double>& taps) {
  const auto r = static_cast<std::ptrdiff_t>(taps.size() / 2);
  std::vector<double> tmp(g.size());
  auto idx = [](std::ptrdiff_t i, std::size_t n) {
    return static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 1));
  };
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -r; k <= r; ++k) {
        acc += taps[static_cast<std::size_t>(k + r)] *
               g[y * w + idx(static_cast<std::ptrdiff_t>(x) + k, w)];
      }
      tmp[y * w + x] = acc;
    }
  }
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -r; k <= r; ++k) {
        acc += taps[static_cast<std::size_t>(k + r)] *
               tmp[idx(static_cast<std::ptrdiff_t>(y) + k, h) * w + x];
      }
      g[y * w + x] = acc;
    }
  }
}

}  // namespace

std::size_t motion_depth(const FrameSequence& seq, const MagnifyConfig& cfg) {
  if (cfg.depth) return *cfg.depth;
  return pyramid::FilterBank::max_depth(seq.height(), seq.width(),
                                        cfg.octave_fraction);
}

std::vector<ComplexGrid> channel_spectra(const FrameSequence& seq,
                                         std::size_t c, Exec exec) {
  std::vector<ComplexGrid> spectra(seq.frames());
  const auto frames = static_cast<std::ptrdiff_t>(seq.frames());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t t = 0; t < frames; ++t) {
    spectra[static_cast<std::size_t>(t)] =
        fft::forward_2d(seq.channel_plane(static_cast<std::size_t>(t), c));
  }
  return spectra;
}

ComplexStack band_time_stack(const std::vector<ComplexGrid>& spectra,
                             const pyramid::BandMask& band,
                             const pyramid::FilterBank& bank, Exec exec) {
  ComplexStack stack(spectra.size(), band.height * band.width);
  const auto frames = static_cast<std::ptrdiff_t>(spectra.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t t = 0; t < frames; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    const ComplexGrid coeffs = pyramid::band_from_spectrum(spectra[ti], band, bank);
    std::copy(coeffs.data().begin(), coeffs.data().end(), stack.row(ti).begin());
  }
  return stack;
}

void smooth_response(const ComplexStack& band, std::size_t height,
                     std::size_t width, double sigma_px, RealStack& response) {
  if (sigma_px <= 0.0) return;
  const auto taps = gaussian_taps(sigma_px);
  const auto frames = static_cast<std::ptrdiff_t>(band.frames);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < frames; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    std::vector<double> weighted(band.samples), weight(band.samples);
    for (std::size_t i = 0; i < band.samples; ++i) {
      weight[i] = std::abs(band(ti, i));
      weighted[i] = weight[i] * response(ti, i);
    }
    blur(weighted, height, width, taps);
    blur(weight, height, width, taps);
    for (std::size_t i = 0; i < band.samples; ++i) {
      response(ti, i) = weight[i] > 0.0 ? weighted[i] / weight[i] : 0.0;
    }
  }
}

FrameSequence magnify_motion_acceleration(const FrameSequence& seq,
                                          const MagnifyConfig& cfg) {
  if (cfg.temporal_filter.kind != TemporalFilterSpec::Kind::acceleration) {
    throw PipelineError("motion magnification uses the acceleration filter");
  }
  const double fps = resolve_fps(seq, cfg);
  const auto kernel = acceleration_kernel(cfg, fps);
  if (kernel.length() > seq.frames()) {
    throw PipelineError("video of " + std::to_string(seq.frames()) +
                        " frames is shorter than the " +
                        std::to_string(kernel.length()) +
                        "-tap acceleration kernel");
  }
  const FrameSequence yiq = as_yiq(seq);
  const std::size_t depth = motion_depth(seq, cfg);
  if (depth < 1) {
    throw PipelineError("frames too small for a steerable pyramid");
  }
  const pyramid::FilterBank bank(seq.height(), seq.width(), cfg.orientations,
                                 cfg.octave_fraction, depth);

  const std::size_t T = seq.frames();
  const std::size_t H = seq.height();
  const std::size_t W = seq.width();
  FrameSequence delta(T, H, W, 3, seq.fps(), Colorspace::yiq);
  const auto frames = static_cast<std::ptrdiff_t>(T);
  const bool par = cfg.exec == Exec::parallel;

  for (std::size_t c = 0; c < channel_count(cfg.channels); ++c) {
    const auto spectra = channel_spectra(yiq, c, cfg.exec);
    std::vector<ComplexGrid> acc(T, ComplexGrid(H, W));
    for (const auto& band : bank.bands()) {
      ComplexStack stack = band_time_stack(spectra, band, bank, cfg.exec);
      RealStack response(stack.frames, stack.samples);
      kernels::filtered_phase(stack, kernel, cfg.boundary, response, cfg.exec);
      smooth_response(stack, band.height, band.width, cfg.phase_smoothing_sigma,
                      response);
      kernels::phase_shift_delta(stack, response, cfg.alpha, cfg.exec);
#pragma omp parallel for schedule(static) if (par)
      for (std::ptrdiff_t t = 0; t < frames; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        ComplexGrid coeffs(band.height, band.width);
        std::copy(stack.row(ti).begin(), stack.row(ti).end(), coeffs.data().begin());
        pyramid::accumulate_band(coeffs, band, bank, acc[ti]);
      }
    }
    const double norm = 1.0 / static_cast<double>(H * W);
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t t = 0; t < frames; ++t) {
      const auto ti = static_cast<std::size_t>(t);
      const ComplexGrid spatial = fft::inverse_2d(acc[ti]);
      RealGrid plane(H, W);
      for (std::size_t i = 0; i < plane.size(); ++i) {
        plane.data()[i] = spatial.data()[i].real() * norm;
      }
      delta.set_channel_plane(ti, c, plane);
    }
  }
  return add_yiq_delta(seq, delta);
}

LevelStacks build_level_stacks(const FrameSequence& yiq, std::size_t level,
                               Exec exec) {
  if (level < 1) throw PipelineError("color level must be >= 1");
  const std::size_t need = std::size_t{1} << level;
  if (yiq.height() < need || yiq.width() < need) {
    throw PipelineError("frames too small for " + std::to_string(level) +
                        " pyramid halvings");
  }
  LevelStacks out;
  out.level = level;
  std::size_t h = yiq.height(), w = yiq.width();
  for (std::size_t k = 0; k < level; ++k) {
    h = (h + 1) / 2;
    w = (w + 1) / 2;
  }
  out.height = h;
  out.width = w;
  const std::size_t T = yiq.frames();
  for (std::size_t c = 0; c < yiq.channels(); ++c) {
    out.channels.emplace_back(T, h * w);
  }
  const auto frames = static_cast<std::ptrdiff_t>(T);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t t = 0; t < frames; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    for (std::size_t c = 0; c < yiq.channels(); ++c) {
      RealGrid g = yiq.channel_plane(ti, c);
      for (std::size_t k = 0; k < level; ++k) g = pyramid::reduce(g);
      std::copy(g.data().begin(), g.data().end(), out.channels[c].row(ti).begin());
    }
  }
  return out;
}

FrameSequence apply_level_filter(const FrameSequence& input,
                                 const LevelStacks& stacks,
                                 const kernels::SeriesFilter& filter,
                                 double alpha, Channels channels, Exec exec) {
  const std::size_t T = input.frames();
  const std::size_t H = input.height();
  const std::size_t W = input.width();
  FrameSequence delta(T, H, W, 3, input.fps(), Colorspace::yiq);
  const auto frames = static_cast<std::ptrdiff_t>(T);
  for (std::size_t c = 0; c < channel_count(channels); ++c) {
    const RealStack& stack = stacks.channels.at(c);
    RealStack filtered(stack.frames, stack.samples);
    kernels::filter_series(stack, filtered, filter, exec);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (std::ptrdiff_t t = 0; t < frames; ++t) {
      const auto ti = static_cast<std::size_t>(t);
      RealGrid level(stacks.height, stacks.width);
      const auto row = filtered.row(ti);
      for (std::size_t i = 0; i < level.size(); ++i) level.data()[i] = alpha * row[i];
      delta.set_channel_plane(ti, c, pyramid::upsample_to(level, H, W, stacks.level));
    }
  }
  return add_yiq_delta(input, delta);
}

namespace {

FrameSequence color_pipeline(const FrameSequence& seq, const MagnifyConfig& cfg) {
  const double fps = resolve_fps(seq, cfg);
  const auto filter = make_series_filter(cfg, fps, seq.frames());
  const FrameSequence yiq = as_yiq(seq);
  const LevelStacks stacks = build_level_stacks(yiq, cfg.color_level, cfg.exec);
  return apply_level_filter(seq, stacks, filter, cfg.alpha, cfg.channels, cfg.exec);
}

}  // namespace

FrameSequence magnify_color_acceleration(const FrameSequence& seq,
                                         const MagnifyConfig& cfg) {
  if (cfg.temporal_filter.kind != TemporalFilterSpec::Kind::acceleration) {
    throw PipelineError("color acceleration needs the acceleration filter");
  }
  return color_pipeline(seq, cfg);
}

FrameSequence magnify_color_linear(const FrameSequence& seq,
                                   const MagnifyConfig& cfg) {
  if (!cfg.temporal_filter.is_bandpass()) {
    throw PipelineError("linear magnification needs an ideal or STFT band-pass");
  }
  return color_pipeline(seq, cfg);
}

FrameSequence magnify(const FrameSequence& seq, const MagnifyConfig& cfg) {
  if (cfg.alpha < 0.0 || !std::isfinite(cfg.alpha)) {
    throw PipelineError("alpha must be a finite value >= 0");
  }
  if (cfg.mode == Mode::motion) return magnify_motion_acceleration(seq, cfg);
  if (cfg.temporal_filter.is_bandpass()) return magnify_color_linear(seq, cfg);
  return magnify_color_acceleration(seq, cfg);
}

}  // namespace accmag::magnify
