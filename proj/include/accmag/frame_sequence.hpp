#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "accmag/grid.hpp"

namespace accmag {

enum class Colorspace { rgb, yiq };

std::string to_string(Colorspace cs);

/// Thrown when a sequence, grid or parameter violates a shape or range
/// precondition.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Time-ordered stack of equally sized multi-channel frames.
///
/// Samples are stored interleaved, index ((t*H + y)*W + x)*C + c. Values are
/// not range-checked: magnified sequences may leave [0,1] until they are
/// written out.
class FrameSequence {
 public:
  FrameSequence() = default;
  FrameSequence(std::size_t frames, std::size_t height, std::size_t width,
                std::size_t channels, double fps,
                Colorspace colorspace = Colorspace::rgb);

  std::size_t frames() const { return frames_; }
  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t channels() const { return channels_; }
  double fps() const { return fps_; }
  Colorspace colorspace() const { return colorspace_; }
  void set_colorspace(Colorspace cs) { colorspace_ = cs; }
  void set_fps(double fps);

  std::size_t frame_size() const { return height_ * width_ * channels_; }
  std::size_t sample_count() const { return samples_.size(); }

  double& at(std::size_t t, std::size_t y, std::size_t x, std::size_t c) {
    return samples_[((t * height_ + y) * width_ + x) * channels_ + c];
  }
  double at(std::size_t t, std::size_t y, std::size_t x, std::size_t c) const {
    return samples_[((t * height_ + y) * width_ + x) * channels_ + c];
  }

  std::span<double> frame(std::size_t t) {
    return std::span<double>(samples_).subspan(t * frame_size(), frame_size());
  }
  std::span<const double> frame(std::size_t t) const {
    return std::span<const double>(samples_).subspan(t * frame_size(),
                                                     frame_size());
  }
  std::span<double> samples() { return samples_; }
  std::span<const double> samples() const { return samples_; }

  /// Copies channel `c` of frame `t` into a single-channel grid.
  RealGrid channel_plane(std::size_t t, std::size_t c) const;
  void set_channel_plane(std::size_t t, std::size_t c, const RealGrid& plane);

  bool same_shape(const FrameSequence& other) const;

  friend bool operator==(const FrameSequence&,
                         const FrameSequence&) = default;

 private:
  std::size_t frames_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t channels_ = 0;
  double fps_ = 0.0;
  Colorspace colorspace_ = Colorspace::rgb;
  std::vector<double> samples_;
};

}  // namespace accmag
