#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "spdc/correlator.hpp"

namespace spdc {

/// Gaussian timing jitter of the whole detection chain.
struct InstrumentResponse {
  double sigma = 0.0;       ///< RMS width (s)
  double truncation = 6.0;  ///< kernel cut at ±truncation·sigma

  void validate() const;
  /// Unit-sum sampled Gaussian of odd length for step dt. Requires dt ≤ sigma/2.
  std::vector<double> kernel(double dt) const;
};

/// Summed counts in bins [t0 + i·bin_width, t0 + (i+1)·bin_width).
struct BinnedHistogram {
  double t0 = 0.0;
  double bin_width = 0.0;
  std::vector<double> counts;

  double bin_start(std::size_t i) const { return t0 + static_cast<double>(i) * bin_width; }
  double total() const;
  void validate() const;
};

/// Row-major 2D histogram, rows along τ₁.
struct BinnedHistogram2D {
  double t0_1 = 0.0;
  double t0_2 = 0.0;
  double bin_width = 0.0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> counts;

  double at(std::size_t i, std::size_t j) const { return counts[i * cols + j]; }
  double total() const;
};

/// Zero-padded convolution with the sampled Gaussian; sigma = 0 is identity.
CorrelationTrace convolve_irf(const CorrelationTrace& trace, const InstrumentResponse& irf);

/// Separable convolution along both axes.
CorrelationMap convolve_irf_2d(const CorrelationMap& map, const InstrumentResponse& irf);

/// Sum consecutive samples into bins of bin_width (an integer multiple of dt);
/// a trailing partial bin is kept so the total is conserved.
BinnedHistogram rebin(const CorrelationTrace& trace, double bin_width);
BinnedHistogram2D rebin(const CorrelationMap& map, double bin_width);

/// rebin(convolve_irf(trace, irf), bin_width) restricted to nbins bins starting
/// at t_start, evaluated in one pass. t_start must be a sample time.
BinnedHistogram convolve_and_rebin(const CorrelationTrace& trace, const InstrumentResponse& irf,
                                   double bin_width, double t_start, std::size_t nbins);

/// Integer number of trace samples per bin; throws BinningError otherwise.
std::size_t samples_per_bin(double dt, double bin_width);

void write_histogram_csv(std::ostream& out, const BinnedHistogram& hist);
void write_histogram_csv(std::ostream& out, const BinnedHistogram2D& hist);
/// Reads `tau_s,counts` rows written by write_histogram_csv.
BinnedHistogram read_histogram_csv(std::istream& in);

}  // namespace spdc
