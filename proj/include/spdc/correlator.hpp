#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "spdc/spectral_model.hpp"

namespace spdc {

/// Uniform time axis: sample i sits at t0 + i·dt.
struct TimeAxis {
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t count = 0;

  double at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  double last() const { return at(count - 1); }
  /// Nearest sample index of time t (may be out of range).
  std::ptrdiff_t nearest(double t) const;
};

/// Non-negative 1D correlation G²(τ) on a uniform axis.
struct CorrelationTrace {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> values;

  TimeAxis axis() const { return {t0, dt, values.size()}; }
  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  /// Samples with t_lo ≤ τ < t_hi (to within 1e-6·dt).
  CorrelationTrace crop(double t_lo, double t_hi) const;
  void validate() const;
};

/// Non-negative 2D correlation, row-major, rows along axis1 (τ₁).
struct CorrelationMap {
  TimeAxis axis1;
  TimeAxis axis2;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * axis2.count + j]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values).subspan(i * axis2.count, axis2.count);
  }
  void validate() const;
};

struct MixtureWeights {
  double a = 1.0;
  double b = 0.0;

  /// Throws DomainError unless a, b ∈ [0,1] and |a + b − 1| ≤ 1e-9.
  static MixtureWeights make(double a, double b);
  static MixtureWeights from_a(double a) { return make(a, 1.0 - a); }
};

/// Range of pair generation-time differences summed in the background map.
struct BackgroundWindow {
  double t_min = 0.0;
  double t_max = 0.0;

  /// The whole representable axis of a trace.
  static BackgroundWindow full_axis(const CorrelationTrace& trace);
};

/// Region of a 2D map: τ ∈ [t_min, t_max) on both axes, summed into bins of
/// bin_factor native samples (the last bin may be partial).
struct MapRegion {
  double t_min = -5e-9;
  double t_max = 5e-9;
  std::size_t bin_factor = 1;
};

/// G_si(τ) = |Σ_k f_k e^{−iω_kτ} Δω|² on τ ∈ (−π/Δω, π/Δω], dt = 2π/(NΔω).
CorrelationTrace g2_signal_idler(const SpectralAmplitude& f);

/// G_ss(τ) = |2·Σ_k f_k² e^{−iω_kτ} Δω|². With symmetrize, returns
/// (G(τ) + G(−τ))/2.
CorrelationTrace g2_signal_signal(const SpectralAmplitude& f, bool symmetrize = false);

/// Copy scaled to unit maximum. Throws ModelError for an all-zero trace.
CorrelationTrace normalized_to_peak(const CorrelationTrace& trace);

/// a·gss + b·gsi; both inputs must already be peak-normalized.
CorrelationTrace mix_ss_si(const CorrelationTrace& gss, const CorrelationTrace& gsi,
                           MixtureWeights weights);

/// G_ssi(τ₁, τ₂) = G_si(τ₁)·G_si(τ₂) of two simultaneously generated pairs.
CorrelationMap g2_ssi_simultaneous(const CorrelationTrace& gsi, const MapRegion& region);
CorrelationMap g2_ssi_simultaneous(const SpectralAmplitude& f, const MapRegion& region);

/// Shift-sum C(τ_i) = Σ_{s ∈ window} G(τ_i + s) over generation-time offsets s
/// on the trace's own sample step; samples off the axis count as zero.
std::vector<double> shift_sum(const CorrelationTrace& gsi, const BackgroundWindow& window);

/// Map including one uncorrelated pair:
/// C₁(τ₁)·G(τ₂) + G(τ₁)·C₂(τ₂) − G(τ₁)·G(τ₂).
CorrelationMap g2_ssi_background(const CorrelationTrace& gsi, const BackgroundWindow& w1,
                                 const BackgroundWindow& w2, const MapRegion& region);
CorrelationMap g2_ssi_background(const SpectralAmplitude& f, const BackgroundWindow& w1,
                                 const BackgroundWindow& w2, const MapRegion& region);
/// Both windows spanning the full axis.
CorrelationMap g2_ssi_background(const SpectralAmplitude& f, const MapRegion& region);

/// `tau_s,<column>` rows.
void write_trace_csv(std::ostream& out, const CorrelationTrace& trace,
                     const char* column = "value");
/// First row is the τ₂ axis, first column the τ₁ axis, body row-major.
void write_map_csv(std::ostream& out, const CorrelationMap& map);

}  // namespace spdc
