#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "accmag/frame_sequence.hpp"
#include "accmag/grid.hpp"

namespace accmag::pyramid {

/// Frequency-domain mask of one oriented sub-band, stored on the cropped
/// spectrum it lives in.
struct BandMask {
  std::size_t scale = 0;        // 0 = finest
  std::size_t orientation = 0;  // angle = pi * orientation / K
  std::size_t height = 0;       // cropped grid
  std::size_t width = 0;
  std::vector<std::size_t> rows;  // cropped row -> full-spectrum row
  std::vector<std::size_t> cols;
  RealGrid mask;  // nonzero on one half-plane only
};

/// Complex steerable filter bank for a fixed image geometry.
///
/// Radial profiles are raised-cosine windows in log2-frequency with scale
/// spacing and transition width both equal to `octave_fraction`; angular
/// profiles are cos^(K-1) restricted to a half-plane, so every sub-band is
/// analytic. Each band is cropped to the smallest even box containing its
/// support, so coarser bands have smaller grids.
class FilterBank {
 public:
  FilterBank(std::size_t height, std::size_t width, std::size_t orientations,
             double octave_fraction, std::size_t depth);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t orientations() const { return orientations_; }
  double octave_fraction() const { return octave_fraction_; }
  std::size_t depth() const { return depth_; }

  const std::vector<BandMask>& bands() const { return bands_; }
  const RealGrid& highpass() const { return highpass_; }
  const BandMask& lowpass() const { return lowpass_; }

  /// hp^2 + lp^2 + sum over bands of (|Psi(w)|^2 + |Psi(-w)|^2) / 2 at every
  /// frequency; identically 1 for a tight bank.
  RealGrid tiling() const;

  /// Largest depth whose lowpass residual keeps >= `min_size` px per side.
  static std::size_t max_depth(std::size_t height, std::size_t width,
                               double octave_fraction,
                               std::size_t min_size = 16);

 private:
  std::size_t height_;
  std::size_t width_;
  std::size_t orientations_;
  double octave_fraction_;
  std::size_t depth_;
  std::vector<BandMask> bands_;
  RealGrid highpass_;
  BandMask lowpass_;
};

/// One frame decomposed by a FilterBank. bands[i] pairs with bank.bands()[i].
struct SteerablePyramid {
  std::vector<ComplexGrid> bands;
  RealGrid highpass;
  RealGrid lowpass;
};

/// Amplitude and phase of one sub-band; phase in (-pi, pi], phase of a zero
/// coefficient is 0.
struct BandDecomposition {
  RealGrid amplitude;
  RealGrid phase;
};

SteerablePyramid analyze(const RealGrid& image, const FilterBank& bank);
RealGrid synthesize(const SteerablePyramid& pyr, const FilterBank& bank);

// Building blocks shared with the streaming motion pipeline.
ComplexGrid band_from_spectrum(const ComplexGrid& spectrum,
                               const BandMask& band, const FilterBank& bank);
/// Adds the synthesis contribution of `coefficients` into `accumulator`
/// (a full-size spectrum); the image is Re(inverse(accumulator)) / (H*W).
void accumulate_band(const ComplexGrid& coefficients, const BandMask& band,
                     const FilterBank& bank, ComplexGrid& accumulator);

double wrapped_phase(Complex c);
std::vector<BandDecomposition> to_phase_amplitude(const SteerablePyramid& pyr);
SteerablePyramid from_phase_amplitude(std::span<const BandDecomposition> bands,
                                      RealGrid highpass, RealGrid lowpass);

/// Level 0 is the input; level k is blur-then-decimate applied k times with
/// the separable binomial [1 4 6 4 1]/16 and edge replication.
std::vector<RealGrid> gaussian_pyramid(const RealGrid& image,
                                       std::size_t levels);
RealGrid reduce(const RealGrid& image);

/// Upsamples `times` times (zero insertion + binomial kernel with gain 4),
/// then crops or edge-pads to exactly target_h x target_w.
RealGrid upsample_to(const RealGrid& grid, std::size_t target_h,
                     std::size_t target_w, std::size_t times);

}  // namespace accmag::pyramid
