#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "accmag/frame_sequence.hpp"
#include "accmag/kernels.hpp"
#include "accmag/pyramid.hpp"
#include "accmag/temporal.hpp"

namespace accmag::magnify {

enum class Mode { motion, color };
enum class Channels { all_yiq, luma_only };

/// How the Gaussian second derivative enters the magnified signal.
/// `normalized` uses -sigma^2 * G'' (unit-scale response, positive gain for
/// changes at the target frequency); `raw` adds G'' exactly as sampled.
enum class KernelScaling { normalized, raw };

struct TemporalFilterSpec {
  enum class Kind { acceleration, ideal_bandpass, stft };
  Kind kind = Kind::acceleration;
  double f_lo = 0.0;  // Hz, band-pass kinds only
  double f_hi = 0.0;
  std::size_t window = 0;  // stft only

  static TemporalFilterSpec acceleration() { return {}; }
  static TemporalFilterSpec ideal(double lo, double hi) {
    return {Kind::ideal_bandpass, lo, hi, 0};
  }
  static TemporalFilterSpec stft(std::size_t window, double lo, double hi) {
    return {Kind::stft, lo, hi, window};
  }
  bool is_bandpass() const { return kind != Kind::acceleration; }
  std::string describe() const;
};

struct MagnifyConfig {
  double alpha = 0.0;
  double target_freq_hz = 0.0;
  double fps = 0.0;  // <= 0: take the sequence's rate
  std::optional<double> sigma_override;
  Mode mode = Mode::motion;
  TemporalFilterSpec temporal_filter;
  std::size_t color_level = 3;
  std::size_t orientations = 8;
  double octave_fraction = 0.5;
  std::optional<std::size_t> depth;  // default: as deep as fits
  Channels channels = Channels::all_yiq;
  KernelScaling kernel_scaling = KernelScaling::normalized;
  temporal::Boundary boundary = temporal::Boundary::replicate;
  double phase_smoothing_sigma = 0.0;  // px; 0 disables
  kernels::Exec exec = kernels::Exec::parallel;

  /// sigma_override if set, else fps / (4 w sqrt 2).
  double sigma(double fps) const;
};

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double resolve_fps(const FrameSequence& seq, const MagnifyConfig& cfg);

/// The acceleration filter actually applied by the pipelines.
temporal::TemporalKernel acceleration_kernel(const MagnifyConfig& cfg, double fps);

/// Per-series temporal filter selected by cfg.temporal_filter.
kernels::SeriesFilter make_series_filter(const MagnifyConfig& cfg, double fps,
                                         std::size_t frames);

FrameSequence magnify_motion_acceleration(const FrameSequence& seq,
                                          const MagnifyConfig& cfg);
FrameSequence magnify_color_acceleration(const FrameSequence& seq,
                                         const MagnifyConfig& cfg);
FrameSequence magnify_color_linear(const FrameSequence& seq,
                                   const MagnifyConfig& cfg);

/// Dispatches on cfg.mode and cfg.temporal_filter.
FrameSequence magnify(const FrameSequence& seq, const MagnifyConfig& cfg);

std::size_t motion_depth(const FrameSequence& seq, const MagnifyConfig& cfg);

// Motion pipeline pieces.

/// Spectrum of channel `c` of every frame.
std::vector<ComplexGrid> channel_spectra(const FrameSequence& seq,
                                         std::size_t c, kernels::Exec exec);

/// Coefficients of one sub-band for every frame, one stack row per frame.
kernels::ComplexStack band_time_stack(const std::vector<ComplexGrid>& spectra,
                                      const pyramid::BandMask& band,
                                      const pyramid::FilterBank& bank,
                                      kernels::Exec exec);

/// Amplitude-weighted Gaussian smoothing of a per-coefficient response,
/// frame by frame on the band grid.
void smooth_response(const kernels::ComplexStack& band, std::size_t height,
                     std::size_t width, double sigma_px,
                     kernels::RealStack& response);

// Color pipeline pieces, exposed so the evaluation harness can reuse one
// Gaussian decomposition for several temporal filters.

/// Gaussian-pyramid level `level` of every YIQ channel, as time stacks.
struct LevelStacks {
  std::size_t level = 0;
  std::size_t height = 0;  // level grid
  std::size_t width = 0;
  std::vector<kernels::RealStack> channels;
};

LevelStacks build_level_stacks(const FrameSequence& yiq, std::size_t level,
                               kernels::Exec exec);

/// input + upsample(alpha * filter(level stack)) with the delta mapped back to
/// input's colorspace.
FrameSequence apply_level_filter(const FrameSequence& input,
                                 const LevelStacks& stacks,
                                 const kernels::SeriesFilter& filter,
                                 double alpha, Channels channels,
                                 kernels::Exec exec);

/// Adds a YIQ delta (T x H x W x 3) to `input`, converting it to the
/// input's colorspace first.
FrameSequence add_yiq_delta(const FrameSequence& input, const FrameSequence& delta);

}  // namespace accmag::magnify
