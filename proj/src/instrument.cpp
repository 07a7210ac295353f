#include "spdc/instrument.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "spdc/errors.hpp"
#include "spdc/kernels.hpp"

namespace spdc {

void InstrumentResponse::validate() const {
  if (!std::isfinite(sigma) || sigma < 0.0) throw DomainError("irf sigma must be >= 0");
  if (!std::isfinite(truncation) || truncation < 3.0) {
    throw DomainError("irf truncation must be >= 3");
  }
}

std::vector<double> InstrumentResponse::kernel(double dt) const {
  validate();
  if (sigma == 0.0) return {1.0};
  if (!(dt > 0.0) || dt > 0.5 * sigma) {
    throw ResolutionError("trace step too coarse for the IRF: need dt <= sigma/2");
  }
  const auto half = static_cast<std::size_t>(std::ceil(truncation * sigma / dt - 1e-9));
  std::vector<double> k(2 * half + 1);
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double x = (static_cast<double>(i) - static_cast<double>(half)) * dt / sigma;
    k[i] = std::exp(-0.5 * x * x);
  }
  const double norm = std::accumulate(k.begin(), k.end(), 0.0);
  for (double& v : k) v /= norm;
  return k;
}

double BinnedHistogram::total() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }

void BinnedHistogram::validate() const {
  if (!(bin_width > 0.0)) throw DomainError("histogram bin_width must be > 0");
  for (double c : counts) {
    if (!std::isfinite(c) || c < 0.0) throw DomainError("histogram counts must be finite and >= 0");
  }
}

double BinnedHistogram2D::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0.0);
}

CorrelationTrace convolve_irf(const CorrelationTrace& trace, const InstrumentResponse& irf) {
  const auto kernel = irf.kernel(trace.dt);
  if (kernel.size() == 1) return trace;
  CorrelationTrace out{trace.t0, trace.dt, std::vector<double>(trace.values.size())};
  kernels::convolve_same(trace.values, kernel, out.values);
  return out;
}

CorrelationMap convolve_irf_2d(const CorrelationMap& map, const InstrumentResponse& irf) {
  const auto k1 = irf.kernel(map.axis1.dt);
  const auto k2 = irf.kernel(map.axis2.dt);
  if (k1.size() == 1 && k2.size() == 1) return map;
  const std::size_t rows = map.axis1.count;
  const std::size_t cols = map.axis2.count;
  std::vector<double> tmp(map.values.size());
  CorrelationMap out{map.axis1, map.axis2, std::vector<double>(map.values.size())};
  kernels::convolve_rows(map.values, rows, cols, k2, tmp);
  kernels::convolve_cols(tmp, rows, cols, k1, out.values);
  return out;
}

std::size_t samples_per_bin(double dt, double bin_width) {
  if (!(dt > 0.0) || !(bin_width > 0.0)) throw BinningError("bin width and dt must be > 0");
  const double ratio = bin_width / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw BinningError("bin width must be an integer multiple of the sample step");
  }
  return static_cast<std::size_t>(rounded);
}

BinnedHistogram rebin(const CorrelationTrace& trace, double bin_width) {
  const std::size_t factor = samples_per_bin(trace.dt, bin_width);
  BinnedHistogram hist{trace.t0, trace.dt * static_cast<double>(factor),
                       std::vector<double>((trace.values.size() + factor - 1) / factor, 0.0)};
  for (std::size_t i = 0; i < trace.values.size(); ++i) hist.counts[i / factor] += trace.values[i];
  return hist;
}

BinnedHistogram2D rebin(const CorrelationMap& map, double bin_width) {
  const std::size_t f1 = samples_per_bin(map.axis1.dt, bin_width);
  const std::size_t f2 = samples_per_bin(map.axis2.dt, bin_width);
  BinnedHistogram2D hist;
  hist.t0_1 = map.axis1.t0;
  hist.t0_2 = map.axis2.t0;
  hist.bin_width = map.axis1.dt * static_cast<double>(f1);
  hist.rows = (map.axis1.count + f1 - 1) / f1;
  hist.cols = (map.axis2.count + f2 - 1) / f2;
  hist.counts.assign(hist.rows * hist.cols, 0.0);
  for (std::size_t i = 0; i < map.axis1.count; ++i) {
    double* row = hist.counts.data() + (i / f1) * hist.cols;
    for (std::size_t j = 0; j < map.axis2.count; ++j) row[j / f2] += map.at(i, j);
  }
  return hist;
}

BinnedHistogram convolve_and_rebin(const CorrelationTrace& trace, const InstrumentResponse& irf,
                                   double bin_width, double t_start, std::size_t nbins) {
  const std::size_t factor = samples_per_bin(trace.dt, bin_width);
  const double offset = (t_start - trace.t0) / trace.dt;
  const double rounded = std::round(offset);
  if (std::abs(offset - rounded) > 1e-6) {
    throw BinningError("histogram start is not aligned with the trace samples");
  }
  if (rounded < 0.0 ||
      rounded + static_cast<double>(nbins * factor) > static_cast<double>(trace.values.size())) {
    throw RangeError("histogram range exceeds the trace time axis");
  }
  const auto kernel = irf.kernel(trace.dt);
  BinnedHistogram hist{trace.time(static_cast<std::size_t>(rounded)),
                       trace.dt * static_cast<double>(factor), std::vector<double>(nbins)};
  kernels::convolve_bin(trace.values, kernel, factor, static_cast<std::size_t>(rounded),
                        hist.counts);
  return hist;
}

void write_histogram_csv(std::ostream& out, const BinnedHistogram& hist) {
  out << "tau_s,counts\n";
  char line[64];
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", hist.bin_start(i), hist.counts[i]);
    out << line;
  }
}

void write_histogram_csv(std::ostream& out, const BinnedHistogram2D& hist) {
  char cell[32];
  out << "tau1_s\\tau2_s";
  for (std::size_t j = 0; j < hist.cols; ++j) {
    std::snprintf(cell, sizeof cell, ",%.17g", hist.t0_2 + static_cast<double>(j) * hist.bin_width);
    out << cell;
  }
  out << '\n';
  for (std::size_t i = 0; i < hist.rows; ++i) {
    std::snprintf(cell, sizeof cell, "%.17g", hist.t0_1 + static_cast<double>(i) * hist.bin_width);
    out << cell;
    for (std::size_t j = 0; j < hist.cols; ++j) {
      std::snprintf(cell, sizeof cell, ",%.17g", hist.at(i, j));
      out << cell;
    }
    out << '\n';
  }
}

BinnedHistogram read_histogram_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("tau_s,", 0) != 0) {
    throw FormatError("histogram CSV must start with a tau_s,<column> header");
  }
  std::vector<double> taus;
  BinnedHistogram hist;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw FormatError("malformed histogram row: " + line);
    try {
      taus.push_back(std::stod(line.substr(0, comma)));
      hist.counts.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw FormatError("malformed histogram row: " + line);
    }
  }
  if (taus.size() < 2) throw FormatError("histogram CSV needs at least two rows");
  hist.t0 = taus.front();
  hist.bin_width = (taus.back() - taus.front()) / static_cast<double>(taus.size() - 1);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (std::abs(taus[i] - hist.bin_start(i)) > 1e-6 * hist.bin_width) {
      throw FormatError("histogram rows are not evenly spaced");
    }
  }
  hist.validate();
  return hist;
}

}  // namespace spdc
