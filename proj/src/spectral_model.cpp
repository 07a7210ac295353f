#include "spdc/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "spdc/errors.hpp"

namespace spdc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpeedOfLight = 299792458.0;

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw ConfigError(std::string(name) + " must be finite and > 0");
  }
}

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

}  // namespace

void SourceParams::validate() const {
  require_positive(pump_angular_frequency, "pump_angular_frequency");
  require_positive(signal_center_frequency, "signal_center_frequency");
  require_positive(roundtrip_time_signal, "roundtrip_time_signal");
  require_positive(roundtrip_time_idler, "roundtrip_time_idler");
  require_positive(pm_sinc_halfwidth, "pm_sinc_halfwidth");
  if (!std::isfinite(finesse_signal) || finesse_signal <= 1.0) {
    throw ConfigError("finesse_signal must be > 1");
  }
  if (!std::isfinite(finesse_idler) || finesse_idler <= 1.0) {
    throw ConfigError("finesse_idler must be > 1");
  }
  if (!std::isfinite(birefringent_pass_delay) || birefringent_pass_delay < 0.0) {
    throw ConfigError("birefringent_pass_delay must be finite and >= 0");
  }
  if (roundtrip_time_idler < roundtrip_time_signal) {
    throw ConfigError("roundtrip_time_idler must be >= roundtrip_time_signal");
  }
  if (signal_center_frequency >= pump_angular_frequency) {
    throw ConfigError("signal_center_frequency must be below pump_angular_frequency");
  }
}

SourceParams SourceParams::desk() {
  SourceParams p;
  p.signal_center_frequency = 2.0 * kPi * kSpeedOfLight / 894.3e-9;
  p.pump_angular_frequency = 2.0 * p.signal_center_frequency;
  p.roundtrip_time_signal = 667e-12;
  p.roundtrip_time_idler = 667e-12;
  p.finesse_signal = 15.0;
  p.finesse_idler = 15.0;
  p.pm_sinc_halfwidth = 2.0 * kPi * 100e9;
  p.birefringent_pass_delay = 0.0;
  return p;
}

SourceParams SourceParams::birefringent_desk() {
  SourceParams p = desk();
  p.roundtrip_time_idler = 675e-12;
  p.birefringent_pass_delay = 4e-12;
  return p;
}

void FrequencyGrid::validate() const {
  if (!is_power_of_two(count)) {
    throw ConfigError("grid_count must be a power of two >= 2");
  }
  if (!std::isfinite(step) || step <= 0.0) {
    throw ConfigError("grid_step must be finite and > 0");
  }
  if (!std::isfinite(center) || center <= 0.0) {
    throw ConfigError("grid center must be finite and > 0");
  }
}

double FrequencyGrid::time_step() const { return 2.0 * kPi / span(); }

FrequencyGrid FrequencyGrid::centered_on(double center, std::size_t count, double step) {
  FrequencyGrid grid;
  grid.center = center;
  grid.count = count;
  grid.step = step > 0.0 ? step : 2.0 * kPi / (static_cast<double>(count) * kDefaultTimeStep);
  grid.validate();
  return grid;
}

SpectralAmplitude::SpectralAmplitude(FrequencyGrid grid, std::vector<std::complex<double>> values)
    : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.count) {
    throw ShapeError("spectral amplitude length does not match grid count");
  }
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("spectral amplitude contains non-finite values");
    }
  }
}

double roundtrip_reflectivity(double finesse) { return std::exp(-kPi / finesse); }

std::complex<double> airy_amplitude(double detuning, double roundtrip_time, double finesse) {
  if (!std::isfinite(detuning) || !std::isfinite(roundtrip_time) || !std::isfinite(finesse)) {
    throw DomainError("airy_amplitude: non-finite input");
  }
  if (roundtrip_time <= 0.0 || finesse <= 1.0) {
    throw DomainError("airy_amplitude: requires roundtrip_time > 0 and finesse > 1");
  }
  const double r = roundtrip_reflectivity(finesse);
  // Reduce the phase first so that detunings a whole FSR apart agree bitwise.
  const double phase = std::remainder(detuning * roundtrip_time, 2.0 * kPi);
  return std::sqrt(1.0 - r * r) / (1.0 - r * std::polar(1.0, phase));
}

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

SpectralAmplitude build_phase_matching(const SourceParams& params, const FrequencyGrid& grid) {
  params.validate();
  grid.validate();
  if (grid.span() < 8.0 * params.pm_sinc_halfwidth) {
    throw ConfigError("frequency grid span must cover at least 8x pm_sinc_halfwidth");
  }
  const double tol = 1e-12 * params.signal_center_frequency;
  if (std::abs(grid.center - params.signal_center_frequency) > tol) {
    throw ConfigError("frequency grid must be centered on signal_center_frequency");
  }

  std::vector<std::complex<double>> values(grid.count);
  double peak = 0.0;
#pragma omp parallel for reduction(max : peak) schedule(static)
  for (std::size_t k = 0; k < grid.count; ++k) {
    const double nu = grid.detuning(k);
    // Idler detuning (ω_p − ω) − (ω_p − ω_s0) is exactly −ν.
    const auto value = sinc(nu / params.pm_sinc_halfwidth) *
                       airy_amplitude(nu, params.roundtrip_time_signal, params.finesse_signal) *
                       airy_amplitude(-nu, params.roundtrip_time_idler, params.finesse_idler) *
                       std::polar(1.0, nu * params.birefringent_pass_delay);
    values[k] = value;
    peak = std::max(peak, std::abs(value));
  }
  if (!(peak > 0.0)) {
    throw ModelError("phase-matching function vanishes on the grid");
  }
  for (auto& v : values) v /= peak;
  return SpectralAmplitude(grid, std::move(values));
}

void write_spectral_csv(std::ostream& out, const SpectralAmplitude& f) {
  out << "omega_rad_s,re,im\n";
  char line[96];
  const auto values = f.values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", f.grid().omega(k), values[k].real(),
                  values[k].imag());
    out << line;
  }
}

}  // namespace spdc
