#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "accmag/frame_sequence.hpp"

namespace accmag::videoio {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// NTSC RGB -> YIQ.
inline constexpr Matrix3 kRgbToYiq = {{
    {0.299, 0.587, 0.114},
    {0.595716, -0.274453, -0.321263},
    {0.211456, -0.522591, 0.311135},
}};

/// Exact inverse of kRgbToYiq (computed in double precision).
const Matrix3& yiq_to_rgb_matrix();

std::array<double, 3> apply(const Matrix3& m, const std::array<double, 3>& v);

FrameSequence rgb_to_yiq(const FrameSequence& seq);
FrameSequence yiq_to_rgb(const FrameSequence& seq);

/// Reads a numbered image sequence or a Y4M stream.
///
/// `path_pattern` is one of: a `.y4m` file; a printf-style pattern such as
/// `frames/%06d.png` (first index 0 or 1, consecutive); a directory whose
/// `.png` files are ordered by the number in their name; or a single `.png`.
/// Image sequences carry no frame rate, so `fps` is required for them; for
/// Y4M input an explicit `fps` overrides the header rate.
FrameSequence load_frames(const std::string& path_pattern,
                          std::optional<double> fps = std::nullopt);

/// Writes an RGB sequence as 8-bit PNGs or as a C444 Y4M stream.
///
/// A path ending in `.y4m` selects Y4M; a pattern containing `%` is
/// expanded with 1-based frame indices; anything else is treated as a
/// directory receiving `000001.png`, `000002.png`, ... Out-of-range samples
/// are clipped with a warning on stderr. Returns the number of clipped
/// samples.
std::size_t save_frames(const FrameSequence& seq,
                        const std::string& path_pattern);

}  // namespace accmag::videoio
