#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "accmag/frame_sequence.hpp"
#include "accmag/kernels.hpp"
#include "accmag/magnify.hpp"
#include "accmag/synth.hpp"

namespace accmag::eval {

/// Mean squared difference over all T*H*W*C samples, in 8-bit^2 units.
double mse(const FrameSequence& a, const FrameSequence& b);

struct SweepRow {
  std::string method;
  double param = 0.0;
  double mse = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  /// Orders rows by method name, then parameter.
  void sort();
  std::vector<std::string> methods() const;
  /// (param, mse) pairs of one method in parameter order.
  std::vector<std::pair<double, double>> curve(const std::string& method) const;
  double at(const std::string& method, double param) const;
};

/// Harness settings shared by both sweeps. Method names: "identity",
/// "acceleration", "ideal_bandpass", "stft:<odd window>".
struct SweepOptions {
  std::vector<std::string> methods{"acceleration", "ideal_bandpass", "stft:5",
                                   "stft:15", "stft:25"};
  double start = 0.0;
  double stop = 0.0;
  double step = 0.25;
  double alpha = 8.0;
  std::size_t level = 3;
  double gt_factor = 4.0;
  double band_halfwidth_hz = 0.5;
  magnify::KernelScaling kernel_scaling = magnify::KernelScaling::normalized;
  kernels::Exec exec = kernels::Exec::parallel;
};

/// Renders the ball and its ground truth for `spec`, runs every method at
/// target frequency `target_hz` and returns (method, mse) in input order.
std::vector<std::pair<std::string, double>> evaluate_point(
    const synth::BallSpec& spec, double target_hz, const SweepOptions& options);

/// Sweeps the intensity frequency with every method retuned to it. The
/// clip length is fixed for the whole sweep at the longest acceleration
/// kernel it needs (never below base.duration_frames).
SweepTable run_frequency_sweep(const synth::BallSpec& base,
                               const SweepOptions& options);

/// Sweeps diagonal ball speed at base.intensity_freq_hz. Each clip is the
/// longest (<= base.duration_frames) that keeps the ball in frame.
SweepTable run_speed_sweep(const synth::BallSpec& base,
                           const SweepOptions& options);

/// Sweep grid start + i*step for i = 0.. while <= stop.
std::vector<double> sweep_points(double start, double stop, double step);

std::string to_csv(const SweepTable& table);
/// Blocks per method separated by two blank lines, "# method" headers.
std::string to_gnuplot(const SweepTable& table);
void emit_csv(const SweepTable& table, const std::string& path);
void emit_gnuplot(const SweepTable& table, const std::string& path);
SweepTable parse_csv(const std::string& text);

}  // namespace accmag::eval
