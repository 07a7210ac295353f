#pragma once

#include <vector>

#include "spdc/instrument.hpp"
#include "spdc/oracle_mc.hpp"

namespace spdc {

/// Window and bin width are resolved to whole picoseconds. Counted delays
/// satisfy −window ≤ Δt < window, Δt = t_target − t_reference.
struct CorrelationConfig {
  double window = 20e-9;
  double bin_width = 50e-12;
  Channel reference = Channel::Idler;
  std::vector<Channel> targets{Channel::Signal1};

  void validate(std::size_t expected_targets) const;
  std::size_t bin_count() const;
};

/// Every (reference, target) pair inside the window, bins [−window + i·w, …).
BinnedHistogram correlate_1d(const TimeTagStream& stream, const CorrelationConfig& cfg);

/// One count per (target1, target2) pair around each reference record, at
/// (Δt₁, Δt₂).
BinnedHistogram2D correlate_2d(const TimeTagStream& stream, const CorrelationConfig& cfg);

}  // namespace spdc
