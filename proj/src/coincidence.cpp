#include "spdc/coincidence.hpp"

#include <cmath>

#include "spdc/errors.hpp"
#include "spdc/kernels.hpp"

namespace spdc {

namespace {

std::int64_t picoseconds(double seconds) { return std::llround(seconds * 1e12); }

void require_sorted(const TimeTagStream& stream) {
  for (std::size_t i = 1; i < stream.records.size(); ++i) {
    if (stream.records[i].time_ps < stream.records[i - 1].time_ps) {
      throw InputError("time-tag stream is not sorted");
    }
  }
}

}  // namespace

void CorrelationConfig::validate(std::size_t expected_targets) const {
  if (!std::isfinite(window) || !std::isfinite(bin_width) || picoseconds(bin_width) <= 0 ||
      picoseconds(window) <= picoseconds(bin_width)) {
    throw ConfigError("correlation requires window > bin_width >= 1 ps");
  }
  if (targets.size() != expected_targets) {
    throw ConfigError("correlation needs exactly " + std::to_string(expected_targets) +
                      " target channel(s)");
  }
  for (const Channel c : targets) {
    if (c == reference) throw ConfigError("target channel must differ from the reference channel");
  }
}

std::size_t CorrelationConfig::bin_count() const {
  const std::int64_t w = picoseconds(bin_width);
  return static_cast<std::size_t>((2 * picoseconds(window) + w - 1) / w);
}

BinnedHistogram correlate_1d(const TimeTagStream& stream, const CorrelationConfig& cfg) {
  cfg.validate(1);
  require_sorted(stream);
  const std::int64_t window = picoseconds(cfg.window);
  const std::int64_t bin = picoseconds(cfg.bin_width);

  BinnedHistogram hist{-static_cast<double>(window) * 1e-12, static_cast<double>(bin) * 1e-12,
                       std::vector<double>(cfg.bin_count())};
  const auto ref = stream.times_of(cfg.reference);
  const auto target = stream.times_of(cfg.targets[0]);
  kernels::correlate_pairs(ref, target, window, bin, hist.counts);
  return hist;
}

BinnedHistogram2D correlate_2d(const TimeTagStream& stream, const CorrelationConfig& cfg) {
  cfg.validate(2);
  require_sorted(stream);
  const std::int64_t window = picoseconds(cfg.window);
  const std::int64_t bin = picoseconds(cfg.bin_width);
  const std::size_t n = cfg.bin_count();

  BinnedHistogram2D hist;
  hist.t0_1 = hist.t0_2 = -static_cast<double>(window) * 1e-12;
  hist.bin_width = static_cast<double>(bin) * 1e-12;
  hist.rows = hist.cols = n;
  hist.counts.assign(n * n, 0.0);
  const auto ref = stream.times_of(cfg.reference);
  const auto t1 = stream.times_of(cfg.targets[0]);
  const auto t2 = stream.times_of(cfg.targets[1]);
  kernels::correlate_triples(ref, t1, t2, window, bin, n, hist.counts);
  return hist;
}

}  // namespace spdc
