#include "cli.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "accmag/eval.hpp"
#include "accmag/magnify.hpp"
#include "accmag/manifest.hpp"
#include "accmag/synth.hpp"
#include "accmag/temporal.hpp"
#include "accmag/videoio.hpp"

namespace accmag::cli {

namespace {

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ArgumentError("bad number '" + item + "'");
    }
    if (used != item.size()) throw ArgumentError("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

magnify::TemporalFilterSpec parse_filter(const std::string& text) {
  if (text == "acceleration") return magnify::TemporalFilterSpec::acceleration();
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (colon == std::string::npos) throw ArgumentError("unknown filter '" + text + "'");
  const auto nums = split_numbers(text.substr(colon + 1));
  if (kind == "ideal" && nums.size() == 2) {
    return magnify::TemporalFilterSpec::ideal(nums[0], nums[1]);
  }
  if (kind == "stft" && nums.size() == 3) {
    if (nums[0] < 1 || nums[0] != static_cast<double>(static_cast<long>(nums[0]))) {
      throw ArgumentError("stft window must be a positive integer");
    }
    return magnify::TemporalFilterSpec::stft(static_cast<std::size_t>(nums[0]), nums[1],
                                             nums[2]);
  }
  throw ArgumentError("filter must be acceleration, ideal:LO,HI or stft:N,LO,HI");
}

std::string manifest_path_for(const std::string& output) {
  std::string base = output;
  while (base.size() > 1 && base.back() == '/') base.pop_back();
  const auto pct = base.find('%');
  if (pct != std::string::npos) {
    base = std::filesystem::path(base).parent_path().string();
    if (base.empty()) base = ".";
    return base + "/manifest.txt";
  }
  return base + ".manifest.txt";
}

std::string fixed(double v, int decimals = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

struct MagnifyArgs {
  std::string mode;
  std::string filter = "acceleration";
  std::optional<double> alpha, freq, fps, sigma;
  std::size_t level = 3;
  bool luma_only = false;
  std::string preset;
  std::string input, output, manifest;
  std::string scaling = "normalized";
  double smoothing = 0.0;
};

int run_magnify(const MagnifyArgs& a, int threads, std::ostream& out, std::ostream& err) {
  Timer timer;
  magnify::MagnifyConfig cfg;
  RunManifest manifest("magnify");
  std::optional<double> alpha = a.alpha, freq = a.freq, fps = a.fps, sigma = a.sigma;
  magnify::Mode mode = magnify::Mode::motion;
  if (!a.preset.empty()) {
    const Preset* p = find_preset(a.preset);
    if (!p) throw ArgumentError("unknown preset '" + a.preset + "'");
    if (!alpha) alpha = p->alpha;
    if (!freq) freq = p->freq_hz;
    if (!fps) fps = p->fps;
    if (!sigma) sigma = p->sigma;
    mode = p->mode;
    if (preset_sigma_inconsistent(*p) && !a.sigma) {
      err << "warning: preset " << p->name << " sigma " << fixed(p->sigma, 2)
          << " differs from fps/(4 w sqrt2) = "
          << fixed(temporal::sigma_from_frequency(p->fps, p->freq_hz), 2)
          << "; using the preset value\n";
    }
    manifest.set("preset", p->name);
  }
  if (a.mode == "motion") mode = magnify::Mode::motion;
  else if (a.mode == "color") mode = magnify::Mode::color;
  else if (!a.mode.empty()) throw ArgumentError("--mode must be motion or color");
  else if (a.preset.empty()) throw ArgumentError("--mode is required");
  if (!alpha) throw ArgumentError("--alpha is required");
  if (!freq) throw ArgumentError("--freq is required");

  cfg.mode = mode;
  cfg.alpha = *alpha;
  cfg.target_freq_hz = *freq;
  cfg.sigma_override = sigma;
  cfg.temporal_filter = parse_filter(a.filter);
  cfg.color_level = a.level;
  cfg.channels = a.luma_only ? magnify::Channels::luma_only : magnify::Channels::all_yiq;
  cfg.kernel_scaling = a.scaling == "raw" ? magnify::KernelScaling::raw
                                          : magnify::KernelScaling::normalized;
  cfg.phase_smoothing_sigma = a.smoothing;

  const FrameSequence input = videoio::load_frames(a.input, fps);
  cfg.fps = input.fps();
  const double rate = input.fps();
  const FrameSequence result = magnify::magnify(input, cfg);
  const std::size_t clipped = videoio::save_frames(result, a.output);

  manifest.set("mode", mode == magnify::Mode::motion ? "motion" : "color");
  manifest.set("filter", cfg.temporal_filter.describe());
  manifest.set("alpha", fixed(cfg.alpha));
  manifest.set("freq_hz", fixed(cfg.target_freq_hz));
  manifest.set("fps", fixed(rate));
  manifest.set("sigma", fixed(cfg.sigma(rate)));
  manifest.set("sigma_source", sigma ? (a.sigma ? "override" : "preset") : "formula");
  manifest.set("kernel_scaling", a.scaling);
  if (mode == magnify::Mode::color) {
    manifest.set("level", std::to_string(cfg.color_level));
  } else {
    manifest.set("orientations", std::to_string(cfg.orientations));
    manifest.set("octave_fraction", fixed(cfg.octave_fraction));
    manifest.set("depth", std::to_string(magnify::motion_depth(input, cfg)));
    manifest.set("phase_smoothing_sigma", fixed(cfg.phase_smoothing_sigma));
  }
  manifest.set("channels", a.luma_only ? "luma" : "yiq");
  manifest.set("frames", std::to_string(input.frames()));
  manifest.set("height", std::to_string(input.height()));
  manifest.set("width", std::to_string(input.width()));
  manifest.set("input", a.input);
  manifest.set("output", a.output);
  manifest.set("clipped_samples", std::to_string(clipped));
  manifest.set("threads", std::to_string(threads));
  manifest.set_timing(utc_timestamp(), timer.seconds());
  const std::string path = a.manifest.empty() ? manifest_path_for(a.output) : a.manifest;
  manifest.write(path);
  out << "wrote " << input.frames() << " frames to " << a.output << " (sigma "
      << fixed(cfg.sigma(rate)) << ", manifest " << path << ")\n";
  return 0;
}

struct SynthArgs {
  synth::BallSpec spec;
  double speed = 1.0;
  std::optional<double> x0, y0;
  std::optional<double> gt_factor;
  std::string output, manifest;
  std::size_t size = 256;
};

int run_synth(SynthArgs a, int threads, std::ostream& out) {
  Timer timer;
  a.spec.height = a.spec.width = a.size;
  a.spec.velocity = synth::BallSpec::diagonal(a.speed);
  if (a.x0 || a.y0) {
    if (!(a.x0 && a.y0)) throw ArgumentError("--x0 and --y0 go together");
    a.spec.start = synth::Vec2{*a.x0, *a.y0};
  }
  const FrameSequence seq = a.gt_factor ? synth::render_ball_groundtruth(a.spec, *a.gt_factor)
                                        : synth::render_ball(a.spec);
  videoio::save_frames(seq, a.output);

  RunManifest manifest("synth-ball");
  std::istringstream spec_lines(synth::to_text(a.spec));
  std::string line;
  while (std::getline(spec_lines, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) manifest.set(line.substr(0, eq), line.substr(eq + 1));
  }
  if (a.gt_factor) manifest.set("gt_factor", fixed(*a.gt_factor));
  manifest.set("output", a.output);
  manifest.set("threads", std::to_string(threads));
  manifest.set_timing(utc_timestamp(), timer.seconds());
  const std::string path = a.manifest.empty() ? manifest_path_for(a.output) : a.manifest;
  manifest.write(path);
  out << "wrote " << seq.frames() << " frames to " << a.output << " (manifest " << path
      << ")\n";
  return 0;
}

struct EvalArgs {
  std::string sweep = "point";
  std::optional<double> start, stop, step;
  std::vector<std::string> methods{"identity", "acceleration", "ideal_bandpass", "stft:5",
                                   "stft:15", "stft:25"};
  std::string output, gnuplot, manifest;
  double alpha = 8.0;
  double background = 0.5;
  std::string scaling = "normalized";
};

int run_evaluate(const EvalArgs& a, int threads, std::ostream& out) {
  Timer timer;
  for (const auto& m : a.methods) {
    if (m != "identity" && m != "acceleration" && m != "ideal_bandpass" &&
        m.rfind("stft:", 0) != 0) {
      throw ArgumentError("unknown method '" + m + "'");
    }
  }
  eval::SweepOptions opt;
  opt.methods = a.methods;
  opt.alpha = a.alpha;
  opt.kernel_scaling = a.scaling == "raw" ? magnify::KernelScaling::raw
                                          : magnify::KernelScaling::normalized;
  synth::BallSpec base;
  base.background = a.background;
  eval::SweepTable table;
  if (a.sweep == "frequency") {
    opt.start = a.start.value_or(0.5);
    opt.stop = a.stop.value_or(7.0);
    opt.step = a.step.value_or(0.25);
    base.velocity = synth::BallSpec::diagonal(0.5);
    table = eval::run_frequency_sweep(base, opt);
  } else if (a.sweep == "speed") {
    opt.start = a.start.value_or(0.0);
    opt.stop = a.stop.value_or(7.0);
    opt.step = a.step.value_or(0.25);
    table = eval::run_speed_sweep(base, opt);
  } else if (a.sweep == "point") {
    base.velocity = synth::BallSpec::diagonal(1.0);
    for (auto& [m, v] : eval::evaluate_point(base, base.intensity_freq_hz, opt)) {
      table.rows.push_back({m, base.intensity_freq_hz, v});
    }
    table.sort();
  } else {
    throw ArgumentError("--sweep must be frequency, speed or point");
  }

  if (a.output.empty() || a.output == "-") {
    out << eval::to_csv(table);
  } else {
    eval::emit_csv(table, a.output);
  }
  if (!a.gnuplot.empty()) eval::emit_gnuplot(table, a.gnuplot);

  RunManifest manifest("evaluate");
  manifest.set("sweep", a.sweep);
  manifest.set("background", fixed(a.background));
  for (const auto& [k, v] : table.metadata) manifest.set(k, v);
  std::string joined;
  for (const auto& m : a.methods) joined += (joined.empty() ? "" : ",") + m;
  manifest.set("methods", joined);
  manifest.set("output", a.output.empty() ? "-" : a.output);
  if (!a.gnuplot.empty()) manifest.set("gnuplot", a.gnuplot);
  manifest.set("threads", std::to_string(threads));
  manifest.set_timing(utc_timestamp(), timer.seconds());
  std::string path = a.manifest;
  if (path.empty()) {
    path = (a.output.empty() || a.output == "-") ? "evaluate.manifest.txt"
                                                 : manifest_path_for(a.output);
  }
  manifest.write(path);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Acceleration magnification of subtle changes in video", "accmag"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: OMP_NUM_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  MagnifyArgs ma;
  auto* mag = app.add_subcommand("magnify", "magnify a video");
  mag->add_option("--mode", ma.mode, "motion or color")->check(CLI::IsMember({"motion", "color"}));
  mag->add_option("--filter", ma.filter,
                  "acceleration | ideal:LO,HI | stft:N,LO,HI")
      ->capture_default_str();
  mag->add_option("--alpha", ma.alpha, "magnification factor");
  mag->add_option("--freq", ma.freq, "target frequency (Hz)");
  mag->add_option("--fps", ma.fps, "frame rate; required for image sequences");
  mag->add_option("--sigma", ma.sigma, "temporal scale in frames (bypasses the formula)");
  mag->add_option("--level", ma.level, "Gaussian pyramid level for color mode")
      ->capture_default_str();
  mag->add_flag("--luma-only", ma.luma_only, "process only the Y channel");
  std::vector<std::string> preset_names;
  for (const auto& p : presets()) preset_names.push_back(p.name);
  mag->add_option("--preset", ma.preset, "named parameter set")
      ->check(CLI::IsMember(preset_names));
  mag->add_option("--kernel-scaling", ma.scaling, "normalized or raw")
      ->check(CLI::IsMember({"normalized", "raw"}))
      ->capture_default_str();
  mag->add_option("--phase-smoothing", ma.smoothing, "amplitude-weighted phase blur (px)")
      ->check(CLI::NonNegativeNumber);
  mag->add_option("--input", ma.input, "frame directory, printf pattern, or .y4m")->required();
  mag->add_option("--output", ma.output, "output directory, pattern, or .y4m")->required();
  mag->add_option("--manifest", ma.manifest, "manifest path (default: next to output)");

  SynthArgs sa;
  auto* syn = app.add_subcommand("synth-ball", "render the synthetic ball sequence");
  syn->add_option("--size", sa.size, "frame side (px)")->capture_default_str();
  syn->add_option("--radius", sa.spec.radius)->capture_default_str();
  syn->add_option("--speed", sa.speed, "diagonal speed (px/frame)")->capture_default_str();
  syn->add_option("--x0", sa.x0, "start column (default: centred trajectory)");
  syn->add_option("--y0", sa.y0, "start row");
  syn->add_option("--base", sa.spec.base_intensity)->capture_default_str();
  syn->add_option("--amplitude", sa.spec.intensity_amplitude, "8-bit units")
      ->capture_default_str();
  syn->add_option("--freq", sa.spec.intensity_freq_hz)->capture_default_str();
  syn->add_option("--fps", sa.spec.fps)->capture_default_str();
  syn->add_option("--frames", sa.spec.duration_frames)->capture_default_str();
  syn->add_option("--background", sa.spec.background)->capture_default_str();
  syn->add_option("--gt-factor", sa.gt_factor, "render the ground truth at this factor");
  syn->add_option("--output", sa.output)->required();
  syn->add_option("--manifest", sa.manifest);

  EvalArgs ea;
  auto* ev = app.add_subcommand("evaluate", "MSE of each method against the ground truth");
  ev->add_option("--sweep", ea.sweep, "point, frequency or speed")
      ->check(CLI::IsMember({"point", "frequency", "speed"}))
      ->capture_default_str();
  ev->add_option("--start", ea.start);
  ev->add_option("--stop", ea.stop);
  ev->add_option("--step", ea.step);
  ev->add_option("--alpha", ea.alpha)->capture_default_str();
  ev->add_option("--background", ea.background, "ball scene background level")
      ->capture_default_str();
  ev->add_option("--kernel-scaling", ea.scaling, "normalized or raw")
      ->check(CLI::IsMember({"normalized", "raw"}))
      ->capture_default_str();
  ev->add_option("--methods", ea.methods)->delimiter(',');
  ev->add_option("--output", ea.output, "CSV path (default: stdout)");
  ev->add_option("--gnuplot", ea.gnuplot, "also write gnuplot data blocks here");
  ev->add_option("--manifest", ea.manifest);

  if (argc <= 1) {
    err << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  if (threads > 0) omp_set_num_threads(threads);
  const int used = threads > 0 ? threads : omp_get_max_threads();

  try {
    if (*mag) return run_magnify(ma, used, out, err);
    if (*syn) return run_synth(sa, used, out);
    if (*ev) return run_evaluate(ea, used, out);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace accmag::cli
