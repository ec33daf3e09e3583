#include "accmag/frame_sequence.hpp"

#include <cmath>

namespace accmag {

std::string to_string(Colorspace cs) {
  return cs == Colorspace::rgb ? "RGB" : "YIQ";
}

FrameSequence::FrameSequence(std::size_t frames, std::size_t height,
                             std::size_t width, std::size_t channels,
                             double fps, Colorspace colorspace)
    : frames_(frames),
      height_(height),
      width_(width),
      channels_(channels),
      colorspace_(colorspace) {
  if (frames == 0 || height == 0 || width == 0 || channels == 0) {
    throw ShapeError("frame sequence needs T, H, W, C >= 1");
  }
  set_fps(fps);
  samples_.assign(frames * height * width * channels, 0.0);
}

void FrameSequence::set_fps(double fps) {
  if (!(fps > 0.0) || !std::isfinite(fps)) {
    throw ShapeError("frame rate must be positive");
  }
  fps_ = fps;
}

RealGrid FrameSequence::channel_plane(std::size_t t, std::size_t c) const {
  RealGrid plane(height_, width_);
  const auto src = frame(t);
  auto dst = plane.data();
  for (std::size_t i = 0; i < height_ * width_; ++i) {
    dst[i] = src[i * channels_ + c];
  }
  return plane;
}

void FrameSequence::set_channel_plane(std::size_t t, std::size_t c,
                                      const RealGrid& plane) {
  if (plane.height() != height_ || plane.width() != width_) {
    throw ShapeError("plane size does not match the sequence");
  }
  auto dst = frame(t);
  const auto src = plane.data();
  for (std::size_t i = 0; i < height_ * width_; ++i) {
    dst[i * channels_ + c] = src[i];
  }
}

bool FrameSequence::same_shape(const FrameSequence& other) const {
  return frames_ == other.frames_ && height_ == other.height_ &&
         width_ == other.width_ && channels_ == other.channels_;
}

}  // namespace accmag
