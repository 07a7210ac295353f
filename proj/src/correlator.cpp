#include "spdc/correlator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "spdc/errors.hpp"
#include "spdc/fft.hpp"
#include "spdc/kernels.hpp"

namespace spdc {

namespace {

constexpr double kIndexSlack = 1e-6;

// |DFT|² laid out on τ_m = m·dt, m ∈ (−N/2, N/2], ascending.
CorrelationTrace modulus_squared_on_time_axis(std::span<const std::complex<double>> spectrum,
                                              const FrequencyGrid& grid, double prefactor) {
  const auto transformed = fft::forward(spectrum);
  const std::size_t n = transformed.size();
  const std::size_t half = n / 2;
  const double scale = prefactor * grid.step;

  CorrelationTrace trace;
  trace.dt = grid.time_step();
  trace.t0 = -static_cast<double>(half - 1) * trace.dt;
  trace.values.resize(n);
  // FFT bin j holds τ = j·dt for j ≤ N/2 and τ = (j − N)·dt above; the
  // e^{−iω_s0 τ} carrier and (−1)^j shift are pure phases.
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t pos = j <= half ? j + half - 1 : j - half - 1;
    trace.values[pos] = std::norm(scale * transformed[j]);
  }
  return trace;
}

std::size_t index_at_or_after(const TimeAxis& axis, double t) {
  const double x = (t - axis.t0) / axis.dt;
  return static_cast<std::size_t>(std::max(0.0, std::ceil(x - kIndexSlack)));
}

std::vector<double> bin_sums(std::span<const double> values, std::size_t first, std::size_t count,
                             std::size_t factor) {
  std::vector<double> out((count + factor - 1) / factor, 0.0);
  for (std::size_t i = 0; i < count; ++i) out[i / factor] += values[first + i];
  return out;
}

struct RegionIndices {
  std::size_t first;
  std::size_t count;
  TimeAxis binned_axis;
};

RegionIndices resolve_region(const CorrelationTrace& trace, const MapRegion& region) {
  if (region.bin_factor == 0) throw BinningError("map bin_factor must be >= 1");
  if (!(region.t_min < region.t_max)) throw RangeError("map region requires t_min < t_max");
  const TimeAxis axis = trace.axis();
  const double lo = (region.t_min - axis.t0) / axis.dt;
  const double hi = (region.t_max - axis.t0) / axis.dt;
  if (lo < -0.5 - kIndexSlack || hi > static_cast<double>(axis.count) + 0.5 + kIndexSlack) {
    throw RangeError("map region exceeds the trace time axis");
  }
  const std::size_t first = index_at_or_after(axis, region.t_min);
  const std::size_t end = std::min(axis.count, index_at_or_after(axis, region.t_max));
  if (end <= first) throw RangeError("map region contains no samples");
  const std::size_t count = end - first;
  TimeAxis binned{axis.at(first), axis.dt * static_cast<double>(region.bin_factor),
                  (count + region.bin_factor - 1) / region.bin_factor};
  return {first, count, binned};
}

void check_window(const CorrelationTrace& trace, const BackgroundWindow& w) {
  if (!(w.t_min < 0.0 && 0.0 < w.t_max)) {
    throw RangeError("background window requires t_min < 0 < t_max");
  }
  const TimeAxis axis = trace.axis();
  if (w.t_min < axis.t0 - 0.5 * axis.dt || w.t_max > axis.last() + 0.5 * axis.dt) {
    throw RangeError("background window exceeds the trace time axis");
  }
}

}  // namespace

std::ptrdiff_t TimeAxis::nearest(double t) const {
  return static_cast<std::ptrdiff_t>(std::llround((t - t0) / dt));
}

CorrelationTrace CorrelationTrace::crop(double t_lo, double t_hi) const {
  const TimeAxis ax = axis();
  const std::size_t first = std::min(values.size(), index_at_or_after(ax, t_lo));
  const std::size_t end = std::max(first, std::min(values.size(), index_at_or_after(ax, t_hi)));
  CorrelationTrace out;
  out.t0 = ax.at(first);
  out.dt = dt;
  out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(first),
                    values.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

void CorrelationTrace::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("trace dt must be > 0");
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError("trace values must be finite and >= 0");
  }
}

void CorrelationMap::validate() const {
  if (!(axis1.dt > 0.0) || !(axis2.dt > 0.0)) throw DomainError("map axes need dt > 0");
  if (values.size() != axis1.count * axis2.count) throw ShapeError("map size mismatch");
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError("map values must be finite and >= 0");
  }
}

MixtureWeights MixtureWeights::make(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
    throw DomainError("mixture weights must lie in [0, 1]");
  }
  if (std::abs(a + b - 1.0) > 1e-9) throw DomainError("mixture weights must sum to 1");
  return {a, b};
}

BackgroundWindow BackgroundWindow::full_axis(const CorrelationTrace& trace) {
  return {trace.t0, trace.axis().last()};
}

CorrelationTrace g2_signal_idler(const SpectralAmplitude& f) {
  return modulus_squared_on_time_axis(f.values(), f.grid(), 1.0);
}

CorrelationTrace g2_signal_signal(const SpectralAmplitude& f, bool symmetrize) {
  std::vector<std::complex<double>> squared(f.values().begin(), f.values().end());
  for (auto& v : squared) v *= v;
  auto trace = modulus_squared_on_time_axis(squared, f.grid(), 2.0);
  if (symmetrize) {
    // τ_p = (p − N/2 + 1)·dt; −τ_p lives at N − 2 − p, and τ = −N/2·dt wraps
    // onto the last sample.
    const std::size_t n = trace.values.size();
    std::vector<double> sym(n);
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t mirror = p + 2 <= n ? n - 2 - p : n - 1;
      sym[p] = 0.5 * (trace.values[p] + trace.values[mirror]);
    }
    trace.values = std::move(sym);
  }
  return trace;
}

CorrelationTrace normalized_to_peak(const CorrelationTrace& trace) {
  const double peak = trace.values.empty()
                          ? 0.0
                          : *std::max_element(trace.values.begin(), trace.values.end());
  if (!(peak > 0.0)) throw ModelError("cannot peak-normalize an all-zero trace");
  CorrelationTrace out = trace;
  for (double& v : out.values) v /= peak;
  return out;
}

CorrelationTrace mix_ss_si(const CorrelationTrace& gss, const CorrelationTrace& gsi,
                           MixtureWeights weights) {
  if (gss.values.size() != gsi.values.size() || gss.dt != gsi.dt || gss.t0 != gsi.t0) {
    throw ShapeError("mix_ss_si: traces must share the same time axis");
  }
  auto peak_of = [](const CorrelationTrace& t) {
    return t.values.empty() ? 0.0 : *std::max_element(t.values.begin(), t.values.end());
  };
  if (std::abs(peak_of(gss) - 1.0) > 1e-9 || std::abs(peak_of(gsi) - 1.0) > 1e-9) {
    throw DomainError("mix_ss_si: inputs must be peak-normalized");
  }
  CorrelationTrace out;
  out.t0 = gsi.t0;
  out.dt = gsi.dt;
  out.values.resize(gsi.values.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = weights.a * gss.values[i] + weights.b * gsi.values[i];
  }
  return out;
}

CorrelationMap g2_ssi_simultaneous(const CorrelationTrace& gsi, const MapRegion& region) {
  const auto idx = resolve_region(gsi, region);
  const auto g = bin_sums(gsi.values, idx.first, idx.count, region.bin_factor);

  CorrelationMap map{idx.binned_axis, idx.binned_axis, std::vector<double>(g.size() * g.size())};
  const kernels::SeparableTerm term{1.0, g, g};
  kernels::assemble_separable(std::span(&term, 1), g.size(), g.size(), map.values);
  return map;
}

CorrelationMap g2_ssi_simultaneous(const SpectralAmplitude& f, const MapRegion& region) {
  return g2_ssi_simultaneous(g2_signal_idler(f), region);
}

std::vector<double> shift_sum(const CorrelationTrace& gsi, const BackgroundWindow& window) {
  check_window(gsi, window);
  const std::size_t n = gsi.values.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + gsi.values[i];

  const auto s_lo = static_cast<std::ptrdiff_t>(std::ceil(window.t_min / gsi.dt - kIndexSlack));
  const auto s_hi = static_cast<std::ptrdiff_t>(std::floor(window.t_max / gsi.dt + kIndexSlack));
  const auto last = static_cast<std::ptrdiff_t>(n);
  std::vector<double> out(n);
  for (std::ptrdiff_t i = 0; i < last; ++i) {
    const std::ptrdiff_t lo = std::clamp<std::ptrdiff_t>(i + s_lo, 0, last);
    const std::ptrdiff_t hi = std::clamp<std::ptrdiff_t>(i + s_hi + 1, 0, last);
    out[i] = hi > lo ? prefix[hi] - prefix[lo] : 0.0;
  }
  return out;
}

CorrelationMap g2_ssi_background(const CorrelationTrace& gsi, const BackgroundWindow& w1,
                                 const BackgroundWindow& w2, const MapRegion& region) {
  const auto idx = resolve_region(gsi, region);
  const auto g = bin_sums(gsi.values, idx.first, idx.count, region.bin_factor);
  const auto c1 = bin_sums(shift_sum(gsi, w1), idx.first, idx.count, region.bin_factor);
  const auto c2 = bin_sums(shift_sum(gsi, w2), idx.first, idx.count, region.bin_factor);

  const kernels::SeparableTerm terms[] = {{1.0, c1, g}, {1.0, g, c2}, {-1.0, g, g}};
  CorrelationMap map{idx.binned_axis, idx.binned_axis, std::vector<double>(g.size() * g.size())};
  kernels::assemble_separable(terms, g.size(), g.size(), map.values);
  // The subtraction only cancels the shift-0 terms already inside C₁ and C₂;
  // clip the rounding residue.
  for (double& v : map.values) v = std::max(v, 0.0);
  return map;
}

CorrelationMap g2_ssi_background(const SpectralAmplitude& f, const BackgroundWindow& w1,
                                 const BackgroundWindow& w2, const MapRegion& region) {
  return g2_ssi_background(g2_signal_idler(f), w1, w2, region);
}

CorrelationMap g2_ssi_background(const SpectralAmplitude& f, const MapRegion& region) {
  const auto gsi = g2_signal_idler(f);
  const auto full = BackgroundWindow::full_axis(gsi);
  return g2_ssi_background(gsi, full, full, region);
}

void write_trace_csv(std::ostream& out, const CorrelationTrace& trace, const char* column) {
  out << "tau_s," << column << '\n';
  char line[64];
  for (std::size_t i = 0; i < trace.values.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", trace.time(i), trace.values[i]);
    out << line;
  }
}

void write_map_csv(std::ostream& out, const CorrelationMap& map) {
  char cell[32];
  out << "tau1_s\\tau2_s";
  for (std::size_t j = 0; j < map.axis2.count; ++j) {
    std::snprintf(cell, sizeof cell, ",%.17g", map.axis2.at(j));
    out << cell;
  }
  out << '\n';
  for (std::size_t i = 0; i < map.axis1.count; ++i) {
    std::snprintf(cell, sizeof cell, "%.17g", map.axis1.at(i));
    out << cell;
    for (std::size_t j = 0; j < map.axis2.count; ++j) {
      std::snprintf(cell, sizeof cell, ",%.17g", map.at(i, j));
      out << cell;
    }
    out << '\n';
  }
}

}  // namespace spdc
