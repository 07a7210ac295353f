#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "spdc/correlator.hpp"
#include "spdc/spectral_model.hpp"

namespace spdc {

enum class Channel : std::uint8_t { Idler = 0, Signal1 = 1, Signal2 = 2 };

struct TimeTag {
  std::uint64_t time_ps = 0;
  Channel channel = Channel::Idler;

  double seconds() const { return static_cast<double>(time_ps) * 1e-12; }
  friend bool operator==(const TimeTag&, const TimeTag&) = default;
};

/// Detection records sorted by (time, channel).
struct TimeTagStream {
  std::vector<TimeTag> records;
  double duration = 0.0;  ///< s

  /// Throws InputError if unsorted or a record lies outside [0, duration].
  void validate() const;
  std::vector<std::int64_t> times_of(Channel channel) const;
};

struct EmissionModel {
  SourceParams params;
  double pair_rate = 0.0;  ///< generated pairs per second
  double loss_signal = 0.0;
  double loss_idler = 0.0;
  double splitter_ratio = 0.5;  ///< probability a signal photon goes to Signal1

  void validate() const;
};

/// mt19937_64 seeded through SplitMix64 with a uniform double built from the
/// top 53 bits, so sequences do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Uniform on [0, 1).
  double uniform();
  /// Exponential with the given rate, by inversion.
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
};

struct PairDelay {
  double signal = 0.0;  ///< s after the pair epoch
  double idler = 0.0;
};

/// Inverse-CDF sampler of the signal−idler delay τ from a G_si density.
class DelaySampler {
 public:
  /// Throws ModelError if the density is all zero.
  explicit DelaySampler(const CorrelationTrace& density);

  /// Draws τ and returns (max(τ,0), max(−τ,0)).
  PairDelay sample(Rng& rng) const;
  /// τ of the grid sample selected by a uniform variate u ∈ [0,1).
  double delay_for(double u) const;
  const CorrelationTrace& density() const { return density_; }

 private:
  CorrelationTrace density_;
  std::vector<double> cdf_;
};

PairDelay sample_pair_delay(const DelaySampler& sampler, Rng& rng);

/// Poissonian pair epochs at pair_rate over [0, duration); each pair yields an
/// idler and a signal record subject to independent losses, the signal routed
/// to Signal1 with probability splitter_ratio. Deterministic in (model,
/// sampler, duration, seed) and independent of the thread count.
TimeTagStream simulate(const EmissionModel& model, const DelaySampler& sampler, double duration,
                       std::uint64_t seed);
/// Builds the delay density from the model's source on the default grid.
TimeTagStream simulate(const EmissionModel& model, double duration, std::uint64_t seed);

/// Binary time-tag file: magic "SPDCTT01", little-endian u64 record count,
/// then 9-byte records (u64 picoseconds, u8 channel).
void write_timetags(std::ostream& out, const TimeTagStream& stream);
/// Throws FormatError on bad magic, truncation or an unknown channel id.
TimeTagStream read_timetags(std::istream& in);

}  // namespace spdc
