#include "accmag/synth.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace accmag::synth {
namespace {

constexpr int kSubsamples = 4;

FrameSequence render(const BallSpec& spec, double factor) {
  validate(spec, factor);
  FrameSequence seq(spec.duration_frames, spec.height, spec.width, 3, spec.fps);
  const double r2 = spec.radius * spec.radius;
  const auto frames = static_cast<std::ptrdiff_t>(spec.duration_frames);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t tt = 0; tt < frames; ++tt) {
    const auto t = static_cast<std::size_t>(tt);
    const Vec2 c = spec.center_at(t);
    const double ball = spec.intensity_at(t, factor);
    for (std::size_t y = 0; y < spec.height; ++y) {
      for (std::size_t x = 0; x < spec.width; ++x) {
        const double dx0 = static_cast<double>(x) - c.x;
        const double dy0 = static_cast<double>(y) - c.y;
        double coverage = 0.0;
        // Skip the subgrid where the pixel is clearly inside or outside.
        const double d = std::hypot(dx0, dy0);
        if (d <= spec.radius - 0.75) {
          coverage = 1.0;
        } else if (d < spec.radius + 0.75) {
          int hits = 0;
          for (int sy = 0; sy < kSubsamples; ++sy) {
            const double oy = (sy + 0.5) / kSubsamples - 0.5;
            for (int sx = 0; sx < kSubsamples; ++sx) {
              const double ox = (sx + 0.5) / kSubsamples - 0.5;
              const double dx = dx0 + ox;
              const double dy = dy0 + oy;
              if (dx * dx + dy * dy <= r2) ++hits;
            }
          }
          coverage = hits / double(kSubsamples * kSubsamples);
        }
        const double v = coverage * ball + (1.0 - coverage) * spec.background;
        for (std::size_t ch = 0; ch < 3; ++ch) seq.at(t, y, x, ch) = v;
      }
    }
  }
  return seq;
}

}  // namespace

Vec2 BallSpec::diagonal(double speed) {
  const double v = speed / std::numbers::sqrt2;
  return {v, v};
}

Vec2 BallSpec::start_position() const {
  if (start) return *start;
  const double span = static_cast<double>(duration_frames) - 1.0;
  return {(static_cast<double>(width) - 1.0) / 2.0 - velocity.x * span / 2.0,
          (static_cast<double>(height) - 1.0) / 2.0 - velocity.y * span / 2.0};
}

Vec2 BallSpec::center_at(std::size_t frame) const {
  const Vec2 s = start_position();
  const double t = static_cast<double>(frame);
  return {s.x + velocity.x * t, s.y + velocity.y * t};
}

double BallSpec::intensity_at(std::size_t frame, double amplitude_factor) const {
  const double phase = 2.0 * std::numbers::pi * intensity_freq_hz *
                       static_cast<double>(frame) / fps;
  return base_intensity +
         amplitude_factor * intensity_amplitude / 255.0 * std::sin(phase);
}

void validate(const BallSpec& spec, double amplitude_factor) {
  if (!(spec.radius > 0.0)) throw SpecError("ball radius must be positive");
  if (spec.height == 0 || spec.width == 0 || spec.duration_frames == 0) {
    throw SpecError("image size and duration must be positive");
  }
  if (!(spec.fps > 0.0)) throw SpecError("fps must be positive");
  if (spec.background < 0.0 || spec.background > 1.0) {
    throw SpecError("background must lie in [0,1]");
  }
  const double swing = std::abs(amplitude_factor * spec.intensity_amplitude) / 255.0;
  if (spec.base_intensity - swing < 0.0 || spec.base_intensity + swing > 1.0) {
    throw SpecError("intensity " + std::to_string(spec.base_intensity) + " +- " +
                    std::to_string(swing) + " leaves [0,1]");
  }
  const double max_x = static_cast<double>(spec.width) - 1.0;
  const double max_y = static_cast<double>(spec.height) - 1.0;
  for (std::size_t t : {std::size_t{0}, spec.duration_frames - 1}) {
    const Vec2 c = spec.center_at(t);
    if (c.x - spec.radius < 0.0 || c.x + spec.radius > max_x ||
        c.y - spec.radius < 0.0 || c.y + spec.radius > max_y) {
      throw SpecError("ball leaves the frame at frame " + std::to_string(t));
    }
  }
}

std::size_t max_duration(const BallSpec& spec) {
  const double room_x = static_cast<double>(spec.width) - 1.0 - 2.0 * spec.radius;
  const double room_y = static_cast<double>(spec.height) - 1.0 - 2.0 * spec.radius;
  const double vx = std::abs(spec.velocity.x);
  const double vy = std::abs(spec.velocity.y);
  double steps = std::numeric_limits<double>::infinity();
  if (vx > 0.0) steps = std::min(steps, room_x / vx);
  if (vy > 0.0) steps = std::min(steps, room_y / vy);
  if (!std::isfinite(steps)) return spec.duration_frames;
  const auto fit = static_cast<std::size_t>(std::floor(steps + 1e-9)) + 1;
  return std::min(spec.duration_frames, fit);
}

FrameSequence render_ball(const BallSpec& spec) { return render(spec, 1.0); }

FrameSequence render_ball_groundtruth(const BallSpec& spec, double gt_factor) {
  return render(spec, gt_factor);
}

std::string to_text(const BallSpec& spec) {
  std::ostringstream os;
  os << std::setprecision(12);
  const Vec2 s = spec.start_position();
  os << "height=" << spec.height << '\n'
     << "width=" << spec.width << '\n'
     << "radius=" << spec.radius << '\n'
     << "start_x=" << s.x << '\n'
     << "start_y=" << s.y << '\n'
     << "velocity_x=" << spec.velocity.x << '\n'
     << "velocity_y=" << spec.velocity.y << '\n'
     << "base_intensity=" << spec.base_intensity << '\n'
     << "intensity_amplitude=" << spec.intensity_amplitude << '\n'
     << "intensity_freq_hz=" << spec.intensity_freq_hz << '\n'
     << "fps=" << spec.fps << '\n'
     << "duration_frames=" << spec.duration_frames << '\n'
     << "background=" << spec.background << '\n';
  return os.str();
}

}  // namespace accmag::synth
