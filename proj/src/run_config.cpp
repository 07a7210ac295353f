#include "spdc/run_config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc {

namespace {

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

double parse_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE ||
      !std::isfinite(v)) {
    throw ConfigError("config key '" + key + "': not a finite number: '" + text + "'");
  }
  return v;
}

template <typename T>
T parse_unsigned(const std::string& key, const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("config key '" + key + "': not a non-negative integer: '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  throw ConfigError("config key '" + key + "': expected 0/1/true/false: '" + text + "'");
}

Setter real(double RunConfig::*member) {
  return [member](RunConfig& c, const std::string& k, const std::string& v) {
    c.*member = parse_double(k, v);
  };
}

Setter source(double SourceParams::*member) {
  return [member](RunConfig& c, const std::string& k, const std::string& v) {
    c.source.*member = parse_double(k, v);
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"pump_angular_frequency", source(&SourceParams::pump_angular_frequency)},
      {"signal_center_frequency", source(&SourceParams::signal_center_frequency)},
      {"roundtrip_time_signal", source(&SourceParams::roundtrip_time_signal)},
      {"roundtrip_time_idler", source(&SourceParams::roundtrip_time_idler)},
      {"finesse_signal", source(&SourceParams::finesse_signal)},
      {"finesse_idler", source(&SourceParams::finesse_idler)},
      {"pm_sinc_halfwidth", source(&SourceParams::pm_sinc_halfwidth)},
      {"birefringent_pass_delay", source(&SourceParams::birefringent_pass_delay)},
      {"grid_count",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.grid_count = parse_unsigned<std::size_t>(k, v);
       }},
      {"grid_step", real(&RunConfig::grid_step)},
      {"irf_sigma",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.irf.sigma = parse_double(k, v);
       }},
      {"irf_truncation",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.irf.truncation = parse_double(k, v);
       }},
      {"mix_a", real(&RunConfig::mix_a)},
      {"map_half_range", real(&RunConfig::map_half_range)},
      {"map_bin_width", real(&RunConfig::map_bin_width)},
      {"output_half_range", real(&RunConfig::output_half_range)},
      {"pair_rate", real(&RunConfig::pair_rate)},
      {"duration", real(&RunConfig::duration)},
      {"loss_signal", real(&RunConfig::loss_signal)},
      {"loss_idler", real(&RunConfig::loss_idler)},
      {"splitter_ratio", real(&RunConfig::splitter_ratio)},
      {"window", real(&RunConfig::window)},
      {"bin_width", real(&RunConfig::bin_width)},
      {"seed",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.seed = parse_unsigned<std::uint64_t>(k, v);
       }},
      {"symmetrize_ss",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.symmetrize_ss = parse_bool(k, v);
       }},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<ConfigKey>& RunConfig::keys() {
  static const std::vector<ConfigKey> table{
      {"pump_angular_frequency", "rad/s", "pump angular frequency (required)"},
      {"signal_center_frequency", "rad/s", "signal center frequency (required)"},
      {"roundtrip_time_signal", "s", "signal cavity round-trip time (required)"},
      {"roundtrip_time_idler", "s", "idler cavity round-trip time, >= signal (required)"},
      {"finesse_signal", "1", "signal finesse, > 1 (required)"},
      {"finesse_idler", "1", "idler finesse, > 1 (required)"},
      {"pm_sinc_halfwidth", "rad/s", "crystal sinc envelope scale (required)"},
      {"birefringent_pass_delay", "s", "idler exit delay, >= 0 (required)"},
      {"grid_count", "1", "frequency samples, power of two [1048576]"},
      {"grid_step", "rad/s", "frequency step, 0 = 1 ps time step [0]"},
      {"irf_sigma", "s", "detector jitter RMS, 0 = none [0]"},
      {"irf_truncation", "1", "jitter kernel cut in sigmas [6]"},
      {"mix_a", "1", "signal-signal weight a of the mixture, b = 1 - a [0.63]"},
      {"map_half_range", "s", "2D maps cover [-h, h) on both axes [5e-9]"},
      {"map_bin_width", "s", "2D map bin width [1e-11]"},
      {"output_half_range", "s", "1D traces cover [-h, h), 0 = full axis [2e-8]"},
      {"pair_rate", "1/s", "generated pairs per second (simulate)"},
      {"duration", "s", "simulated acquisition time (simulate)"},
      {"loss_signal", "1", "signal loss probability [0]"},
      {"loss_idler", "1", "idler loss probability [0]"},
      {"splitter_ratio", "1", "probability a signal photon reaches channel 1 [0.5]"},
      {"window", "s", "coincidence half window [2e-8]"},
      {"bin_width", "s", "histogram bin width [5e-11]"},
      {"seed", "1", "random seed [1]"},
      {"symmetrize_ss", "bool", "symmetrize the signal-signal trace [0]"},
  };
  return table;
}

const std::vector<std::string_view>& RunConfig::source_keys() {
  static const std::vector<std::string_view> names{
      "pump_angular_frequency", "signal_center_frequency", "roundtrip_time_signal",
      "roundtrip_time_idler",   "finesse_signal",          "finesse_idler",
      "pm_sinc_halfwidth",      "birefringent_pass_delay"};
  return names;
}

RunConfig RunConfig::parse(std::istream& in) {
  RunConfig config;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    if (!config.present.insert(key).second) {
      throw ConfigError("config key '" + key + "' given twice");
    }
    it->second(config, key, value);
  }
  return config;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in);
}

RunConfig RunConfig::desk() {
  RunConfig config;
  config.source = SourceParams::desk();
  for (const auto key : source_keys()) config.present.emplace(key);
  return config;
}

void RunConfig::validate() const {
  auto check = [](bool ok, const char* key, const char* rule) {
    if (!ok) throw ConfigError(std::string("config key '") + key + "' must be " + rule);
  };
  source.validate();
  check(irf.sigma >= 0.0, "irf_sigma", ">= 0");
  check(irf.truncation >= 3.0, "irf_truncation", ">= 3");
  check(mix_a >= 0.0 && mix_a <= 1.0, "mix_a", "in [0, 1]");
  check(map_half_range > 0.0, "map_half_range", "> 0");
  check(map_bin_width > 0.0, "map_bin_width", "> 0");
  check(output_half_range >= 0.0, "output_half_range", ">= 0");
  check(window > 0.0, "window", "> 0");
  check(bin_width > 0.0 && bin_width < window, "bin_width", "> 0 and < window");
  check(loss_signal >= 0.0 && loss_signal <= 1.0, "loss_signal", "in [0, 1]");
  check(loss_idler >= 0.0 && loss_idler <= 1.0, "loss_idler", "in [0, 1]");
  check(splitter_ratio > 0.0 && splitter_ratio < 1.0, "splitter_ratio", "in (0, 1)");
  check(!present.contains("pair_rate") || pair_rate > 0.0, "pair_rate", "> 0");
  check(!present.contains("duration") || duration > 0.0, "duration", "> 0");
  check(grid_step >= 0.0, "grid_step", ">= 0");
}

void RunConfig::require(const std::vector<std::string_view>& names) const {
  for (const auto name : names) {
    if (!present.contains(std::string(name))) {
      throw ConfigError("missing config key '" + std::string(name) + "'");
    }
  }
}

FrequencyGrid RunConfig::grid() const {
  return FrequencyGrid::centered_on(source.signal_center_frequency, grid_count, grid_step);
}

std::string describe_config_keys() {
  std::ostringstream out;
  out << "Config keys (key = value, SI units, [default]):\n";
  for (const auto& k : RunConfig::keys()) {
    out << "  " << k.name;
    for (std::size_t i = std::string_view(k.name).size(); i < 26; ++i) out << ' ';
    out << '(' << k.unit << ") " << k.description << '\n';
  }
  return out.str();
}

}  // namespace spdc
