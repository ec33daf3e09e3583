#pragma once

#include <cstddef>
#include <span>

#include "accmag/grid.hpp"

namespace accmag::fft {

// Thin wrappers over FFTW. Transforms are unnormalized in both directions
// (forward then inverse scales by N). Plans are cached per size and shared
// between threads; executing them is thread-safe.

void forward_2d(std::size_t height, std::size_t width,
                std::span<const Complex> in, std::span<Complex> out);
void inverse_2d(std::size_t height, std::size_t width,
                std::span<const Complex> in, std::span<Complex> out);

ComplexGrid forward_2d(const RealGrid& image);
ComplexGrid forward_2d(const ComplexGrid& grid);
ComplexGrid inverse_2d(const ComplexGrid& spectrum);

void forward_1d(std::span<const Complex> in, std::span<Complex> out);
void inverse_1d(std::span<const Complex> in, std::span<Complex> out);

}  // namespace accmag::fft
