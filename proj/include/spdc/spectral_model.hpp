#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace spdc {

/// Physical description of a triply-resonant type-II SPDC cavity.
/// Times in seconds, frequencies in rad/s.
struct SourceParams {
  double pump_angular_frequency = 0.0;
  double signal_center_frequency = 0.0;
  double roundtrip_time_signal = 0.0;
  double roundtrip_time_idler = 0.0;
  double finesse_signal = 0.0;
  double finesse_idler = 0.0;
  double pm_sinc_halfwidth = 0.0;        ///< scale of the crystal sinc envelope
  double birefringent_pass_delay = 0.0;  ///< fixed idler-vs-signal exit delay

  /// Throws ConfigError naming the first violated field.
  void validate() const;

  /// Degenerate 894.3 nm source, 667 ps round trip, finesse 15 on both arms.
  static SourceParams desk();
  /// desk() with an 8 ps slower idler round trip and a 4 ps exit delay.
  static SourceParams birefringent_desk();
};

/// Uniform grid of signal frequencies ω_k = center + (k − N/2)·step.
struct FrequencyGrid {
  double center = 0.0;
  double step = 0.0;
  std::size_t count = 0;

  void validate() const;

  double detuning(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(count / 2)) * step;
  }
  double omega(std::size_t k) const { return center + detuning(k); }
  double span() const { return static_cast<double>(count) * step; }
  /// Sample step of the conjugate time axis, 2π/(N·Δω).
  double time_step() const;

  static constexpr std::size_t kDefaultCount = std::size_t{1} << 20;
  static constexpr double kDefaultTimeStep = 1e-12;
  /// N = 2^20 with Δω chosen so the conjugate time step is exactly 1 ps.
  static FrequencyGrid centered_on(double center, std::size_t count = kDefaultCount,
                                   double step = 0.0);
};

/// Sampled phase-matching function f(ω_s, ω_p − ω_s), normalized to max |f| = 1.
class SpectralAmplitude {
 public:
  SpectralAmplitude(FrequencyGrid grid, std::vector<std::complex<double>> values);

  const FrequencyGrid& grid() const { return grid_; }
  std::span<const std::complex<double>> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  FrequencyGrid grid_;
  std::vector<std::complex<double>> values_;
};

/// Round-trip amplitude factor of a cavity with the given finesse, exp(−π/F).
double roundtrip_reflectivity(double finesse);

/// Fabry–Pérot amplitude √(1−r²)/(1 − r·e^{i·detuning·T}).
std::complex<double> airy_amplitude(double detuning, double roundtrip_time, double finesse);

/// Unnormalized sinc, sin(x)/x.
double sinc(double x);

/// f(ω) = sinc(ν/Δω_pm)·A(ν; T_s, F_s)·A(−ν; T_i, F_i)·e^{iνδ}, ν = ω − ω_s0.
SpectralAmplitude build_phase_matching(const SourceParams& params, const FrequencyGrid& grid);

/// CSV with header `omega_rad_s,re,im`, 17 significant digits.
void write_spectral_csv(std::ostream& out, const SpectralAmplitude& f);

}  // namespace spdc
