#include "accmag/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace accmag::fft {
namespace {

// FFTW_UNALIGNED keeps the chosen codelets independent of buffer alignment,
// so a transform gives the same bits wherever its arrays live.
constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t height, std::size_t width, int sign) {
    const auto key = std::make_tuple(height, width, sign);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<Complex> scratch(height * width);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan =
        height == 1
            ? fftw_plan_dft_1d(static_cast<int>(width), buf, buf, sign,
                               kPlanFlags)
            : fftw_plan_dft_2d(static_cast<int>(height),
                               static_cast<int>(width), buf, buf, sign,
                               kPlanFlags);
    if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(std::size_t height, std::size_t width, int sign,
             std::span<const Complex> in, std::span<Complex> out) {
  if (in.size() != height * width || out.size() != height * width) {
    throw std::invalid_argument("FFT buffer size mismatch");
  }
  fftw_plan plan = cache().get(height, width, sign);
  // FFTW never writes to the input of an out-of-place complex transform.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, src, dst);
}

}  // namespace

void forward_2d(std::size_t height, std::size_t width,
                std::span<const Complex> in, std::span<Complex> out) {
  execute(height, width, FFTW_FORWARD, in, out);
}

void inverse_2d(std::size_t height, std::size_t width,
                std::span<const Complex> in, std::span<Complex> out) {
  execute(height, width, FFTW_BACKWARD, in, out);
}

ComplexGrid forward_2d(const RealGrid& image) {
  ComplexGrid in(image.height(), image.width());
  for (std::size_t i = 0; i < image.size(); ++i) {
    in.data()[i] = image.data()[i];
  }
  return forward_2d(in);
}

ComplexGrid forward_2d(const ComplexGrid& grid) {
  ComplexGrid out(grid.height(), grid.width());
  forward_2d(grid.height(), grid.width(), grid.data(), out.data());
  return out;
}

ComplexGrid inverse_2d(const ComplexGrid& spectrum) {
  ComplexGrid out(spectrum.height(), spectrum.width());
  inverse_2d(spectrum.height(), spectrum.width(), spectrum.data(), out.data());
  return out;
}

void forward_1d(std::span<const Complex> in, std::span<Complex> out) {
  execute(1, in.size(), FFTW_FORWARD, in, out);
}

void inverse_1d(std::span<const Complex> in, std::span<Complex> out) {
  execute(1, in.size(), FFTW_BACKWARD, in, out);
}

}  // namespace accmag::fft
