#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "accmag/frame_sequence.hpp"

namespace accmag::synth {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// A disc whose intensity oscillates sinusoidally while it moves at constant
/// velocity. Pixel centres sit at integer coordinates.
struct BallSpec {
  std::size_t height = 256;
  std::size_t width = 256;
  double radius = 10.0;
  /// Centre at frame 0. Unset: the trajectory is centred on the image.
  std::optional<Vec2> start;
  Vec2 velocity{0.70710678118654752, 0.70710678118654752};  // px/frame
  double base_intensity = 0.5;
  double intensity_amplitude = 20.0;  // 8-bit units
  double intensity_freq_hz = 2.0;
  double fps = 60.0;
  std::size_t duration_frames = 120;
  double background = 0.5;

  Vec2 start_position() const;
  Vec2 center_at(std::size_t frame) const;
  double intensity_at(std::size_t frame, double amplitude_factor = 1.0) const;

  /// Diagonal (top-left to bottom-right) motion at `speed` px/frame.
  static Vec2 diagonal(double speed);
};

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws SpecError unless the disc stays inside the image for every frame
/// and the given amplitude factor keeps intensities in [0,1].
void validate(const BallSpec& spec, double amplitude_factor = 1.0);

/// Largest duration (<= spec.duration_frames) for which a centred trajectory
/// keeps the disc inside the image.
std::size_t max_duration(const BallSpec& spec);

FrameSequence render_ball(const BallSpec& spec);
FrameSequence render_ball_groundtruth(const BallSpec& spec, double gt_factor);

/// key=value lines describing every field.
std::string to_text(const BallSpec& spec);

}  // namespace accmag::synth
