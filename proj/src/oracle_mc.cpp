#include "spdc/oracle_mc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spdc/errors.hpp"

namespace spdc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Expected pairs per independently seeded time slice.
constexpr double kPairsPerSlice = 65536.0;

bool tag_less(const TimeTag& a, const TimeTag& b) {
  return a.time_ps != b.time_ps ? a.time_ps < b.time_ps : a.channel < b.channel;
}

std::uint64_t to_picoseconds(double seconds) {
  return static_cast<std::uint64_t>(std::llround(seconds * 1e12));
}

}  // namespace

void TimeTagStream::validate() const {
  const std::uint64_t limit = to_picoseconds(duration);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i > 0 && records[i].time_ps < records[i - 1].time_ps) {
      throw InputError("time-tag stream is not sorted");
    }
    if (records[i].time_ps > limit) throw InputError("time tag beyond stream duration");
  }
}

std::vector<std::int64_t> TimeTagStream::times_of(Channel channel) const {
  std::vector<std::int64_t> out;
  for (const auto& r : records) {
    if (r.channel == channel) out.push_back(static_cast<std::int64_t>(r.time_ps));
  }
  return out;
}

void EmissionModel::validate() const {
  params.validate();
  if (!std::isfinite(pair_rate) || pair_rate <= 0.0) throw ConfigError("pair_rate must be > 0");
  if (!(loss_signal >= 0.0 && loss_signal <= 1.0)) throw ConfigError("loss_signal must be in [0,1]");
  if (!(loss_idler >= 0.0 && loss_idler <= 1.0)) throw ConfigError("loss_idler must be in [0,1]");
  if (!(splitter_ratio > 0.0 && splitter_ratio < 1.0)) {
    throw ConfigError("splitter_ratio must be in (0,1)");
  }
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

DelaySampler::DelaySampler(const CorrelationTrace& density) : density_(density) {
  density_.validate();
  cdf_.resize(density_.values.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cdf_.size(); ++i) {
    acc += density_.values[i];
    cdf_[i] = acc;
  }
  if (!(acc > 0.0)) throw ModelError("delay density is identically zero");
}

double DelaySampler::delay_for(double u) const {
  const double target = u * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
  if (it == cdf_.end()) --it;
  // Step back over trailing zero-mass samples reached by u rounding to 1.
  while (it != cdf_.begin() && density_.values[static_cast<std::size_t>(it - cdf_.begin())] == 0.0) {
    --it;
  }
  return density_.time(static_cast<std::size_t>(it - cdf_.begin()));
}

PairDelay DelaySampler::sample(Rng& rng) const {
  const double tau = delay_for(rng.uniform());
  return {std::max(tau, 0.0), std::max(-tau, 0.0)};
}

PairDelay sample_pair_delay(const DelaySampler& sampler, Rng& rng) { return sampler.sample(rng); }

TimeTagStream simulate(const EmissionModel& model, const DelaySampler& sampler, double duration,
                       std::uint64_t seed) {
  model.validate();
  if (!std::isfinite(duration) || duration <= 0.0) throw ConfigError("duration must be > 0");

  const double expected = model.pair_rate * duration;
  const auto slices = static_cast<std::int64_t>(std::max(1.0, std::ceil(expected / kPairsPerSlice)));
  const double slice_length = duration / static_cast<double>(slices);
  const std::uint64_t limit_ps = to_picoseconds(duration);
  std::vector<std::vector<TimeTag>> parts(static_cast<std::size_t>(slices));

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t s = 0; s < slices; ++s) {
    Rng rng(seed, static_cast<std::uint64_t>(s));
    const double start = slice_length * static_cast<double>(s);
    const double end = s + 1 == slices ? duration : start + slice_length;
    auto& out = parts[static_cast<std::size_t>(s)];
    out.reserve(static_cast<std::size_t>(2.2 * kPairsPerSlice));
    for (double t = start + rng.exponential(model.pair_rate); t < end;
         t += rng.exponential(model.pair_rate)) {
      const PairDelay delay = sampler.sample(rng);
      const bool signal_seen = rng.uniform() >= model.loss_signal;
      const bool to_first = rng.uniform() < model.splitter_ratio;
      const bool idler_seen = rng.uniform() >= model.loss_idler;
      const std::uint64_t epoch = to_picoseconds(t);
      if (signal_seen) {
        const std::uint64_t ts = epoch + to_picoseconds(delay.signal);
        if (ts <= limit_ps) out.push_back({ts, to_first ? Channel::Signal1 : Channel::Signal2});
      }
      if (idler_seen) {
        const std::uint64_t ts = epoch + to_picoseconds(delay.idler);
        if (ts <= limit_ps) out.push_back({ts, Channel::Idler});
      }
    }
  }

  TimeTagStream stream;
  stream.duration = duration;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  stream.records.reserve(total);
  for (auto& p : parts) {
    stream.records.insert(stream.records.end(), p.begin(), p.end());
    std::vector<TimeTag>().swap(p);
  }
  std::sort(stream.records.begin(), stream.records.end(), tag_less);
  return stream;
}

TimeTagStream simulate(const EmissionModel& model, double duration, std::uint64_t seed) {
  model.validate();
  const auto grid = FrequencyGrid::centered_on(model.params.signal_center_frequency);
  const DelaySampler sampler(g2_signal_idler(build_phase_matching(model.params, grid)));
  return simulate(model, sampler, duration, seed);
}

}  // namespace spdc
