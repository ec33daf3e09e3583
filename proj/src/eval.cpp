#include "accmag/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "accmag/magnify.hpp"
#include "accmag/temporal.hpp"
#include "accmag/videoio.hpp"

namespace accmag::eval {

double mse(const FrameSequence& a, const FrameSequence& b) {
  if (!a.same_shape(b)) throw ShapeError("mse: sequences differ in shape");
  const auto x = a.samples();
  const auto y = b.samples();
  // Per-frame partial sums in a fixed order keep the result independent of
  // the thread count.
  const std::size_t fs = a.frame_size();
  std::vector<double> partial(a.frames(), 0.0);
  const auto frames = static_cast<std::ptrdiff_t>(a.frames());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < frames; ++t) {
    double acc = 0.0;
    const std::size_t o = static_cast<std::size_t>(t) * fs;
    for (std::size_t i = 0; i < fs; ++i) {
      const double d = x[o + i] - y[o + i];
      acc += d * d;
    }
    partial[static_cast<std::size_t>(t)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total / static_cast<double>(x.size()) * 255.0 * 255.0;
}

void SweepTable::sort() {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.method != b.method) return a.method < b.method;
    return a.param < b.param;
  });
}

std::vector<std::string> SweepTable::methods() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.method) == out.end()) out.push_back(r.method);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<double, double>> SweepTable::curve(const std::string& method) const {
  std::vector<std::pair<double, double>> out;
  for (const auto& r : rows) {
    if (r.method == method) out.emplace_back(r.param, r.mse);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double SweepTable::at(const std::string& method, double param) const {
  for (const auto& r : rows) {
    if (r.method == method && std::abs(r.param - param) < 1e-9) return r.mse;
  }
  throw std::out_of_range("no sweep row for " + method + " at " + std::to_string(param));
}

std::vector<double> sweep_points(double start, double stop, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("sweep step must be positive");
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double p = start + static_cast<double>(i) * step;
    if (p > stop + 1e-9) break;
    out.push_back(p);
  }
  return out;
}

namespace {

magnify::TemporalFilterSpec method_filter(const std::string& method, double target_hz,
                                          double halfwidth) {
  const double lo = std::max(0.0, target_hz - halfwidth);
  const double hi = target_hz + halfwidth;
  if (method == "acceleration") return magnify::TemporalFilterSpec::acceleration();
  if (method == "ideal_bandpass") return magnify::TemporalFilterSpec::ideal(lo, hi);
  if (method.rfind("stft:", 0) == 0) {
    const auto window = std::stoul(method.substr(5));
    return magnify::TemporalFilterSpec::stft(window, lo, hi);
  }
  throw std::invalid_argument("unknown method '" + method + "'");
}

double acceleration_length(double fps, double hz) {
  return 2.0 * static_cast<double>(
                   temporal::log_radius(temporal::sigma_from_frequency(fps, hz))) +
         1.0;
}

}  // namespace

std::vector<std::pair<std::string, double>> evaluate_point(
    const synth::BallSpec& spec, double target_hz, const SweepOptions& options) {
  const FrameSequence ball = synth::render_ball(spec);
  const FrameSequence truth = synth::render_ball_groundtruth(spec, options.gt_factor);
  const auto stacks = magnify::build_level_stacks(videoio::rgb_to_yiq(ball),
                                                  options.level, options.exec);
  std::vector<std::pair<std::string, double>> out;
  for (const auto& method : options.methods) {
    if (method == "identity") {
      out.emplace_back(method, mse(ball, truth));
      continue;
    }
    magnify::MagnifyConfig cfg;
    cfg.mode = magnify::Mode::color;
    cfg.alpha = options.alpha;
    cfg.target_freq_hz = target_hz;
    cfg.fps = spec.fps;
    cfg.color_level = options.level;
    cfg.exec = options.exec;
    cfg.kernel_scaling = options.kernel_scaling;
    cfg.temporal_filter = method_filter(method, target_hz, options.band_halfwidth_hz);
    const auto filter = magnify::make_series_filter(cfg, spec.fps, spec.duration_frames);
    const FrameSequence result = magnify::apply_level_filter(
        ball, stacks, filter, cfg.alpha, cfg.channels, options.exec);
    out.emplace_back(method, mse(result, truth));
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void common_metadata(SweepTable& t, const SweepOptions& o) {
  t.metadata.emplace_back("alpha", fmt(o.alpha));
  t.metadata.emplace_back("level", std::to_string(o.level));
  t.metadata.emplace_back("gt_factor", fmt(o.gt_factor));
  t.metadata.emplace_back("band_halfwidth_hz", fmt(o.band_halfwidth_hz));
  t.metadata.emplace_back("kernel_scaling", o.kernel_scaling == magnify::KernelScaling::raw
                                                ? "raw"
                                                : "normalized");
  t.metadata.emplace_back("start", fmt(o.start));
  t.metadata.emplace_back("stop", fmt(o.stop));
  t.metadata.emplace_back("step", fmt(o.step));
}

}  // namespace

SweepTable run_frequency_sweep(const synth::BallSpec& base, const SweepOptions& options) {
  const auto freqs = sweep_points(options.start, options.stop, options.step);
  if (freqs.empty() || freqs.front() <= 0.0) {
    throw std::invalid_argument("frequency sweep needs positive frequencies");
  }
  synth::BallSpec spec = base;
  double longest = static_cast<double>(spec.duration_frames);
  for (double f : freqs) longest = std::max(longest, acceleration_length(spec.fps, f));
  spec.duration_frames = static_cast<std::size_t>(longest);

  SweepTable table;
  common_metadata(table, options);
  table.metadata.emplace_back("sweep", "frequency");
  table.metadata.emplace_back("speed_px_per_frame",
                              fmt(std::hypot(spec.velocity.x, spec.velocity.y)));
  table.metadata.emplace_back("duration_frames", std::to_string(spec.duration_frames));
  for (double f : freqs) {
    spec.intensity_freq_hz = f;
    for (auto& [method, value] : evaluate_point(spec, f, options)) {
      table.rows.push_back({method, f, value});
    }
  }
  table.sort();
  return table;
}

SweepTable run_speed_sweep(const synth::BallSpec& base, const SweepOptions& options) {
  const auto speeds = sweep_points(options.start, options.stop, options.step);
  SweepTable table;
  common_metadata(table, options);
  table.metadata.emplace_back("sweep", "speed");
  table.metadata.emplace_back("intensity_freq_hz", fmt(base.intensity_freq_hz));
  for (double s : speeds) {
    synth::BallSpec spec = base;
    spec.velocity = synth::BallSpec::diagonal(s);
    spec.start.reset();
    spec.duration_frames = synth::max_duration(spec);
    for (auto& [method, value] : evaluate_point(spec, base.intensity_freq_hz, options)) {
      table.rows.push_back({method, s, value});
    }
  }
  table.sort();
  return table;
}

std::string to_csv(const SweepTable& table) {
  std::string out = "method,param,mse\n";
  for (const auto& r : table.rows) {
    out += r.method + "," + fmt(r.param) + "," + fmt(r.mse) + "\n";
  }
  return out;
}

std::string to_gnuplot(const SweepTable& table) {
  std::string out;
  for (const auto& [k, v] : table.metadata) out += "# " + k + "=" + v + "\n";
  bool first = true;
  for (const auto& m : table.methods()) {
    if (!first) out += "\n\n";
    first = false;
    out += "# " + m + "\n";
    for (const auto& [p, v] : table.curve(m)) out += fmt(p) + " " + fmt(v) + "\n";
  }
  return out;
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot create " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace

void emit_csv(const SweepTable& table, const std::string& path) {
  write_text(path, to_csv(table));
}

void emit_gnuplot(const SweepTable& table, const std::string& path) {
  write_text(path, to_gnuplot(table));
}

SweepTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "method,param,mse") {
    throw std::runtime_error("missing CSV header");
  }
  SweepTable t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    if (a == std::string::npos || b == std::string::npos) {
      throw std::runtime_error("malformed CSV row: " + line);
    }
    t.rows.push_back({line.substr(0, a), std::stod(line.substr(a + 1, b - a - 1)),
                      std::stod(line.substr(b + 1))});
  }
  return t;
}

}  // namespace accmag::eval
