#include "accmag/pyramid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "accmag/fft.hpp"

namespace accmag::pyramid {
namespace {

constexpr double kPi = std::numbers::pi;

// Raised-cosine pair around boundary `r` with transition width `tw` octaves:
// hi = 1 above r, 0 below r * 2^-tw, hi^2 + lo^2 = 1.
struct RadialPair {
  double hi;
  double lo;
};

RadialPair radial_pair(double rad, double r, double tw) {
  if (rad <= 0.0) return {0.0, 1.0};
  const double lr = std::log2(rad / r);
  if (lr >= 0.0) return {1.0, 0.0};
  if (lr <= -tw) return {0.0, 1.0};
  const double arg = lr * kPi / (2.0 * tw);
  return {std::cos(arg), std::abs(std::sin(arg))};
}

// Normalized steering constant: sum_j (a_K cos^(K-1)(theta - pi j/K))^2 = 1.
double angular_gain(std::size_t k) {
  const double kk = static_cast<double>(k);
  const double log_a = (kk - 1.0) * std::log(2.0) + std::lgamma(kk) -
                       0.5 * (std::log(kk) + std::lgamma(2.0 * kk - 1.0));
  return std::exp(log_a);
}

std::ptrdiff_t centered(std::size_t i, std::size_t n) {
  return i < n / 2 ? static_cast<std::ptrdiff_t>(i)
                   : static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(n);
}

// Even crop length holding every bin with |k| < r * n / 2.
std::size_t crop_length(double r, std::size_t n) {
  const auto half =
      static_cast<std::size_t>(std::ceil(r * static_cast<double>(n) / 2.0 - 1e-9));
  return std::min(n, 2 * std::max<std::size_t>(half, 1));
}

BandMask make_crop(double r, std::size_t h_full, std::size_t w_full) {
  BandMask b;
  b.height = crop_length(r, h_full);
  b.width = crop_length(r, w_full);
  b.rows.resize(b.height);
  b.cols.resize(b.width);
  for (std::size_t i = 0; i < b.height; ++i) {
    const auto k = centered(i, b.height);
    b.rows[i] = static_cast<std::size_t>((k + static_cast<std::ptrdiff_t>(h_full)) %
                                         static_cast<std::ptrdiff_t>(h_full));
  }
  for (std::size_t j = 0; j < b.width; ++j) {
    const auto k = centered(j, b.width);
    b.cols[j] = static_cast<std::size_t>((k + static_cast<std::ptrdiff_t>(w_full)) %
                                         static_cast<std::ptrdiff_t>(w_full));
  }
  b.mask = RealGrid(b.height, b.width);
  return b;
}

struct Freq {
  double fx;
  double fy;
  double rad;
};

Freq frequency(std::size_t row, std::size_t col, std::size_t h, std::size_t w) {
  const double fy = 2.0 * static_cast<double>(centered(row, h)) / static_cast<double>(h);
  const double fx = 2.0 * static_cast<double>(centered(col, w)) / static_cast<double>(w);
  return {fx, fy, std::hypot(fx, fy)};
}

void require_geometry(const RealGrid& g, const FilterBank& bank) {
  if (g.height() != bank.height() || g.width() != bank.width()) {
    throw ShapeError("grid " + std::to_string(g.width()) + "x" +
                     std::to_string(g.height()) + " does not match filter bank " +
                     std::to_string(bank.width()) + "x" +
                     std::to_string(bank.height()));
  }
}

ComplexGrid crop_product(const ComplexGrid& spectrum, const BandMask& band) {
  ComplexGrid out(band.height, band.width);
  for (std::size_t i = 0; i < band.height; ++i) {
    for (std::size_t j = 0; j < band.width; ++j) {
      out(i, j) = spectrum(band.rows[i], band.cols[j]) * band.mask(i, j);
    }
  }
  return out;
}

void scale(ComplexGrid& g, double s) {
  for (auto& v : g.data()) v *= s;
}

}  // namespace

FilterBank::FilterBank(std::size_t height, std::size_t width,
                       std::size_t orientations, double octave_fraction,
                       std::size_t depth)
    : height_(height),
      width_(width),
      orientations_(orientations),
      octave_fraction_(octave_fraction),
      depth_(depth) {
  if (orientations < 1) throw ShapeError("need at least one orientation");
  if (!(octave_fraction > 0.0 && octave_fraction <= 1.0)) {
    throw ShapeError("octave_fraction must lie in (0, 1]");
  }
  if (height % 2 != 0 || width % 2 != 0 || height < 2 || width < 2) {
    throw ShapeError("steerable pyramid needs even image dimensions");
  }
  if (depth < 1) throw ShapeError("pyramid depth must be >= 1");
  if (depth > max_depth(height, width, octave_fraction)) {
    throw ShapeError("image " + std::to_string(width) + "x" +
                     std::to_string(height) + " too small for depth " +
                     std::to_string(depth) + " (max " +
                     std::to_string(max_depth(height, width, octave_fraction)) +
                     ")");
  }

  const double tw = octave_fraction;
  auto boundary = [&](std::size_t k) {
    return std::exp2(-static_cast<double>(k) * octave_fraction);
  };

  highpass_ = RealGrid(height, width);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      highpass_(y, x) = radial_pair(frequency(y, x, height, width).rad, 1.0, tw).hi;
    }
  }

  const double gain = angular_gain(orientations);
  const double kk = static_cast<double>(orientations);
  for (std::size_t s = 0; s < depth; ++s) {
    const double outer = boundary(s);
    const double inner = boundary(s + 1);
    for (std::size_t o = 0; o < orientations; ++o) {
      BandMask band = make_crop(outer, height, width);
      band.scale = s;
      band.orientation = o;
      const double theta = kPi * static_cast<double>(o) / kk;
      const double ct = std::cos(theta);
      const double st = std::sin(theta);
      for (std::size_t i = 0; i < band.height; ++i) {
        for (std::size_t j = 0; j < band.width; ++j) {
          const Freq f = frequency(band.rows[i], band.cols[j], height, width);
          const double radial = radial_pair(f.rad, outer, tw).lo *
                                radial_pair(f.rad, inner, tw).hi;
          if (radial == 0.0) continue;
          const double d = f.fx * ct + f.fy * st;
          if (d < 0.0) continue;
          const double side = d > 0.0 ? std::numbers::sqrt2 : 1.0;
          const double angular =
              gain * std::pow(std::abs(d / f.rad), kk - 1.0) * side;
          band.mask(i, j) = radial * angular;
        }
      }
      bands_.push_back(std::move(band));
    }
  }

  lowpass_ = make_crop(boundary(depth), height, width);
  lowpass_.scale = depth;
  for (std::size_t i = 0; i < lowpass_.height; ++i) {
    for (std::size_t j = 0; j < lowpass_.width; ++j) {
      const Freq f = frequency(lowpass_.rows[i], lowpass_.cols[j], height, width);
      lowpass_.mask(i, j) = radial_pair(f.rad, boundary(depth), tw).lo;
    }
  }
}

std::size_t FilterBank::max_depth(std::size_t height, std::size_t width,
                                  double octave_fraction, std::size_t min_size) {
  const double side = static_cast<double>(std::min(height, width));
  std::size_t depth = 0;
  while (side * std::exp2(-static_cast<double>(depth + 1) * octave_fraction) >=
         static_cast<double>(min_size) - 1e-9) {
    ++depth;
  }
  return depth;
}

RealGrid FilterBank::tiling() const {
  RealGrid total(height_, width_);
  for (std::size_t i = 0; i < total.size(); ++i) {
    total.data()[i] = highpass_.data()[i] * highpass_.data()[i];
  }
  for (std::size_t i = 0; i < lowpass_.height; ++i) {
    for (std::size_t j = 0; j < lowpass_.width; ++j) {
      const double v = lowpass_.mask(i, j);
      total(lowpass_.rows[i], lowpass_.cols[j]) += v * v;
    }
  }
  for (const auto& band : bands_) {
    for (std::size_t i = 0; i < band.height; ++i) {
      for (std::size_t j = 0; j < band.width; ++j) {
        const double half_energy = 0.5 * band.mask(i, j) * band.mask(i, j);
        if (half_energy == 0.0) continue;
        const std::size_t r = band.rows[i];
        const std::size_t c = band.cols[j];
        total(r, c) += half_energy;
        total((height_ - r) % height_, (width_ - c) % width_) += half_energy;
      }
    }
  }
  return total;
}

ComplexGrid band_from_spectrum(const ComplexGrid& spectrum,
                               const BandMask& band, const FilterBank& bank) {
  ComplexGrid coeffs = fft::inverse_2d(crop_product(spectrum, band));
  scale(coeffs, 1.0 / static_cast<double>(bank.height() * bank.width()));
  return coeffs;
}

void accumulate_band(const ComplexGrid& coefficients, const BandMask& band,
                     const FilterBank& bank, ComplexGrid& accumulator) {
  if (coefficients.height() != band.height || coefficients.width() != band.width) {
    throw ShapeError("band coefficients do not match the filter bank");
  }
  const ComplexGrid spec = fft::forward_2d(coefficients);
  const double s = static_cast<double>(bank.height() * bank.width()) /
                   static_cast<double>(band.height * band.width);
  for (std::size_t i = 0; i < band.height; ++i) {
    for (std::size_t j = 0; j < band.width; ++j) {
      const double m = band.mask(i, j);
      if (m == 0.0) continue;
      accumulator(band.rows[i], band.cols[j]) += spec(i, j) * (s * m);
    }
  }
}

SteerablePyramid analyze(const RealGrid& image, const FilterBank& bank) {
  require_geometry(image, bank);
  const ComplexGrid spectrum = fft::forward_2d(image);
  const double norm = 1.0 / static_cast<double>(bank.height() * bank.width());

  SteerablePyramid pyr;
  {
    ComplexGrid hp(bank.height(), bank.width());
    for (std::size_t i = 0; i < hp.size(); ++i) {
      hp.data()[i] = spectrum.data()[i] * bank.highpass().data()[i];
    }
    const ComplexGrid spatial = fft::inverse_2d(hp);
    pyr.highpass = RealGrid(bank.height(), bank.width());
    for (std::size_t i = 0; i < spatial.size(); ++i) {
      pyr.highpass.data()[i] = spatial.data()[i].real() * norm;
    }
  }
  {
    const ComplexGrid spatial =
        fft::inverse_2d(crop_product(spectrum, bank.lowpass()));
    pyr.lowpass = RealGrid(spatial.height(), spatial.width());
    for (std::size_t i = 0; i < spatial.size(); ++i) {
      pyr.lowpass.data()[i] = spatial.data()[i].real() * norm;
    }
  }
  pyr.bands.reserve(bank.bands().size());
  for (const auto& band : bank.bands()) {
    pyr.bands.push_back(band_from_spectrum(spectrum, band, bank));
  }
  return pyr;
}

RealGrid synthesize(const SteerablePyramid& pyr, const FilterBank& bank) {
  require_geometry(pyr.highpass, bank);
  const BandMask& lp = bank.lowpass();
  if (pyr.bands.size() != bank.bands().size() ||
      pyr.lowpass.height() != lp.height || pyr.lowpass.width() != lp.width) {
    throw ShapeError("pyramid geometry does not match the filter bank");
  }
  const std::size_t h = bank.height();
  const std::size_t w = bank.width();
  ComplexGrid acc(h, w);
  {
    const ComplexGrid hp = fft::forward_2d(pyr.highpass);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      acc.data()[i] += hp.data()[i] * bank.highpass().data()[i];
    }
  }
  {
    const ComplexGrid lo = fft::forward_2d(pyr.lowpass);
    const double s = static_cast<double>(h * w) / static_cast<double>(lp.height * lp.width);
    for (std::size_t i = 0; i < lp.height; ++i) {
      for (std::size_t j = 0; j < lp.width; ++j) {
        acc(lp.rows[i], lp.cols[j]) += lo(i, j) * (s * lp.mask(i, j));
      }
    }
  }
  for (std::size_t b = 0; b < pyr.bands.size(); ++b) {
    accumulate_band(pyr.bands[b], bank.bands()[b], bank, acc);
  }
  const ComplexGrid spatial = fft::inverse_2d(acc);
  RealGrid out(h, w);
  const double norm = 1.0 / static_cast<double>(h * w);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] = spatial.data()[i].real() * norm;
  }
  return out;
}

double wrapped_phase(Complex c) {
  if (c.real() == 0.0 && c.imag() == 0.0) return 0.0;
  const double p = std::atan2(c.imag(), c.real());
  return p == -kPi ? kPi : p;
}

std::vector<BandDecomposition> to_phase_amplitude(const SteerablePyramid& pyr) {
  std::vector<BandDecomposition> out;
  out.reserve(pyr.bands.size());
  for (const auto& band : pyr.bands) {
    BandDecomposition d{RealGrid(band.height(), band.width()),
                        RealGrid(band.height(), band.width())};
    for (std::size_t i = 0; i < band.size(); ++i) {
      d.amplitude.data()[i] = std::abs(band.data()[i]);
      d.phase.data()[i] = wrapped_phase(band.data()[i]);
    }
    out.push_back(std::move(d));
  }
  return out;
}

SteerablePyramid from_phase_amplitude(std::span<const BandDecomposition> bands,
                                      RealGrid highpass, RealGrid lowpass) {
  SteerablePyramid pyr;
  pyr.highpass = std::move(highpass);
  pyr.lowpass = std::move(lowpass);
  pyr.bands.reserve(bands.size());
  for (const auto& d : bands) {
    if (!d.amplitude.same_shape(d.phase)) {
      throw ShapeError("amplitude and phase grids differ in size");
    }
    ComplexGrid g(d.amplitude.height(), d.amplitude.width());
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.data()[i] = std::polar(d.amplitude.data()[i], d.phase.data()[i]);
    }
    pyr.bands.push_back(std::move(g));
  }
  return pyr;
}

// --- Gaussian pyramid ------------------------------------------------------

namespace {

constexpr double kBinomial[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
  return static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 1));
}

}  // namespace

RealGrid reduce(const RealGrid& image) {
  const std::size_t h = image.height();
  const std::size_t w = image.width();
  const std::size_t oh = (h + 1) / 2;
  const std::size_t ow = (w + 1) / 2;
  // Horizontal blur, evaluated only at even columns.
  RealGrid tmp(h, ow);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = -2; k <= 2; ++k) {
        acc += kBinomial[k + 2] *
               image(y, clamp_index(static_cast<std::ptrdiff_t>(2 * x) + k, w));
      }
      tmp(y, x) = acc;
    }
  }
  RealGrid out(oh, ow);
  for (std::size_t y = 0; y < oh; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = -2; k <= 2; ++k) {
        acc += kBinomial[k + 2] *
               tmp(clamp_index(static_cast<std::ptrdiff_t>(2 * y) + k, h), x);
      }
      out(y, x) = acc;
    }
  }
  return out;
}

std::vector<RealGrid> gaussian_pyramid(const RealGrid& image, std::size_t levels) {
  if (levels < 1) throw ShapeError("gaussian pyramid needs levels >= 1");
  const std::size_t need = std::size_t{1} << levels;
  if (image.height() < need || image.width() < need) {
    throw ShapeError("image " + std::to_string(image.width()) + "x" +
                     std::to_string(image.height()) + " too small for " +
                     std::to_string(levels) + " pyramid levels");
  }
  std::vector<RealGrid> out;
  out.reserve(levels + 1);
  out.push_back(image);
  for (std::size_t k = 0; k < levels; ++k) out.push_back(reduce(out.back()));
  return out;
}

namespace {

// One x2 expansion. Zero insertion followed by the binomial kernel with gain
// 4 reduces to two phases per axis: even outputs (1 6 1)/8, odd (1 1)/2.
RealGrid expand(const RealGrid& g) {
  const std::size_t h = g.height();
  const std::size_t w = g.width();
  RealGrid tmp(h, 2 * w);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double l = g(y, clamp_index(static_cast<std::ptrdiff_t>(x) - 1, w));
      const double c = g(y, x);
      const double r = g(y, clamp_index(static_cast<std::ptrdiff_t>(x) + 1, w));
      tmp(y, 2 * x) = (l + 6.0 * c + r) / 8.0;
      tmp(y, 2 * x + 1) = (c + r) / 2.0;
    }
  }
  RealGrid out(2 * h, 2 * w);
  for (std::size_t y = 0; y < h; ++y) {
    const std::size_t up = clamp_index(static_cast<std::ptrdiff_t>(y) - 1, h);
    const std::size_t dn = clamp_index(static_cast<std::ptrdiff_t>(y) + 1, h);
    for (std::size_t x = 0; x < 2 * w; ++x) {
      const double u = tmp(up, x);
      const double c = tmp(y, x);
      const double d = tmp(dn, x);
      out(2 * y, x) = (u + 6.0 * c + d) / 8.0;
      out(2 * y + 1, x) = (c + d) / 2.0;
    }
  }
  return out;
}

}  // namespace

RealGrid upsample_to(const RealGrid& grid, std::size_t target_h,
                     std::size_t target_w, std::size_t times) {
  RealGrid cur = grid;
  for (std::size_t k = 0; k < times; ++k) cur = expand(cur);
  if (cur.height() == target_h && cur.width() == target_w) return cur;
  RealGrid out(target_h, target_w);
  for (std::size_t y = 0; y < target_h; ++y) {
    const std::size_t sy = std::min(y, cur.height() - 1);
    for (std::size_t x = 0; x < target_w; ++x) {
      out(y, x) = cur(sy, std::min(x, cur.width() - 1));
    }
  }
  return out;
}

}  // namespace accmag::pyramid
