#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "spdc/instrument.hpp"
#include "spdc/spectral_model.hpp"

namespace spdc {

/// Documentation entry of one configuration key.
struct ConfigKey {
  const char* name;
  const char* unit;
  const char* description;
};

/// Plain-text `key = value` settings, one key per line, `#` starts a comment.
struct RunConfig {
  SourceParams source;
  std::size_t grid_count = FrequencyGrid::kDefaultCount;
  double grid_step = 0.0;  ///< 0 selects a 1 ps conjugate time step
  InstrumentResponse irf;
  double mix_a = 0.63;
  double map_half_range = 5e-9;
  double map_bin_width = 10e-12;
  double output_half_range = 20e-9;  ///< 0 writes the full axis
  double pair_rate = 0.0;
  double duration = 0.0;
  double loss_signal = 0.0;
  double loss_idler = 0.0;
  double splitter_ratio = 0.5;
  double window = 20e-9;
  double bin_width = 50e-12;
  std::uint64_t seed = 1;
  bool symmetrize_ss = false;

  /// Keys that were set explicitly.
  std::set<std::string> present;

  /// Throws ConfigError naming the key on unknown keys, duplicates or bad values.
  static RunConfig parse(std::istream& in);
  static RunConfig load(const std::string& path);
  /// Built-in desk source with every source key marked present.
  static RunConfig desk();

  /// Range checks of every setting; throws ConfigError naming the key.
  void validate() const;
  /// Throws ConfigError naming the first missing key.
  void require(const std::vector<std::string_view>& keys) const;
  FrequencyGrid grid() const;

  static const std::vector<ConfigKey>& keys();
  static const std::vector<std::string_view>& source_keys();
};

/// Key table formatted for `--help`.
std::string describe_config_keys();

}  // namespace spdc
