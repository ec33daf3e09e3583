#include "accmag/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "accmag/temporal.hpp"

namespace accmag {

RunManifest::RunManifest(std::string subcommand) {
  entries_.emplace_back("subcommand", std::move(subcommand));
  entries_.emplace_back("version", std::string(kVersion));
}

void RunManifest::set(const std::string& key, const std::string& value) {
  if (key.find('=') != std::string::npos || key.find('\n') != std::string::npos ||
      value.find('\n') != std::string::npos) {
    throw std::invalid_argument("manifest entries must be single-line: " + key);
  }
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void RunManifest::set(const std::string& key, double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  set(key, std::string(buf));
}

std::optional<std::string> RunManifest::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  if (key == "timestamp" && !timestamp_.empty()) return timestamp_;
  return std::nullopt;
}

void RunManifest::set_timing(std::string timestamp, double duration_s) {
  timestamp_ = std::move(timestamp);
  duration_s_ = duration_s;
}

std::string RunManifest::stable_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

std::string RunManifest::to_text() const {
  std::string out = stable_text();
  if (!timestamp_.empty()) out += "timestamp=" + timestamp_ + "\n";
  if (duration_s_) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", *duration_s_);
    out += std::string("duration_s=") + buf + "\n";
  }
  return out;
}

void RunManifest::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot create manifest " + path);
  out << to_text();
  if (!out) throw std::runtime_error("failed writing manifest " + path);
}

RunManifest RunManifest::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  RunManifest m("");
  m.entries_.clear();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("bad manifest line: " + line);
    const std::string k = line.substr(0, eq);
    const std::string v = line.substr(eq + 1);
    if (k == "timestamp") {
      m.timestamp_ = v;
    } else if (k == "duration_s") {
      m.duration_s_ = std::stod(v);
    } else {
      m.entries_.emplace_back(k, v);
    }
  }
  return m;
}

const std::vector<Preset>& presets() {
  using magnify::Mode;
  static const std::vector<Preset> table{
      {"light-bulb", 20, 60, 2.95, 1000, Mode::color},
      {"baby", 100, 2.5, 6.63, 30, Mode::motion},
      {"gun", 8, 20, 4.24, 480, Mode::motion},
      {"synthetic-ball", 8, 2, 5.30, 60, Mode::color},
      {"cat-toy", 4, 3, 1.41, 240, Mode::motion},
      {"parkinson-1", 3, 3, 2.12, 30, Mode::motion},
      {"parkinson-2", 4, 3, 2.12, 30, Mode::motion},
      {"drone", 5, 5, 1.06, 30, Mode::motion},
      {"water-bottle", 4, 2, 2.83, 30, Mode::motion},
  };
  return table;
}

const Preset* find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

bool preset_sigma_inconsistent(const Preset& p) {
  return std::abs(p.sigma - temporal::sigma_from_frequency(p.fps, p.freq_hz)) > 0.005;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace accmag
