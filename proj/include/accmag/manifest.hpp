#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "accmag/magnify.hpp"

namespace accmag {

inline constexpr std::string_view kVersion = "0.1.0";

/// Ordered key=value provenance record. Timing fields are kept apart so the
/// remaining lines are reproducible byte for byte.
class RunManifest {
 public:
  explicit RunManifest(std::string subcommand);

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value, int decimals = 6);
  std::optional<std::string> get(const std::string& key) const;

  void set_timing(std::string timestamp, double duration_s);

  /// All lines; timestamp= and duration_s= come last.
  std::string to_text() const;
  /// to_text() without the timing lines.
  std::string stable_text() const;
  void write(const std::string& path) const;

  static RunManifest parse(const std::string& text);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::string timestamp_;
  std::optional<double> duration_s_;
};

struct Preset {
  std::string name;
  double alpha;
  double freq_hz;
  double sigma;
  double fps;
  magnify::Mode mode;
};

const std::vector<Preset>& presets();
const Preset* find_preset(std::string_view name);

/// |preset sigma - formula sigma| > 0.005.
bool preset_sigma_inconsistent(const Preset& p);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace accmag
