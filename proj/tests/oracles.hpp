#pragma once
// Independent reference computations used only by the tests. None of these
// call into the library's FFT or kernels.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "spdc/correlator.hpp"
#include "spdc/spectral_model.hpp"

namespace oracle {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Trace sample offset m (τ = m·dt) of position p on the centred axis.
inline std::int64_t offset_of(std::size_t p, std::size_t n) {
  return static_cast<std::int64_t>(p) - static_cast<std::int64_t>(n / 2 - 1);
}

/// |Σ_k c·v_k e^{−iν_k τ_m} Δω|² for every m, by direct summation. The phase
/// ν_k τ_m = 2π (k − N/2) m / N is reduced exactly in integers.
inline std::vector<double> direct_power(std::span<const cplx> v, double step, double c) {
  const std::size_t n = v.size();
  const auto nn = static_cast<std::int64_t>(n);
  std::vector<cplx> twiddle(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double phase = -kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    twiddle[j] = {std::cos(phase), std::sin(phase)};
  }
  std::vector<double> out(n);
  for (std::size_t p = 0; p < n; ++p) {
    const std::int64_t m = offset_of(p, n);
    cplx acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::int64_t idx = (((static_cast<std::int64_t>(k) - nn / 2) * m) % nn + nn) % nn;
      acc += v[k] * twiddle[static_cast<std::size_t>(idx)];
    }
    out[p] = std::norm(c * step * acc);
  }
  return out;
}

inline std::vector<double> direct_gsi(const spdc::SpectralAmplitude& f) {
  return direct_power(f.values(), f.grid().step, 1.0);
}

inline std::vector<double> direct_gss(const spdc::SpectralAmplitude& f) {
  std::vector<cplx> sq(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) sq[k] = f.values()[k] * f.values()[k];
  return direct_power(sq, f.grid().step, 2.0);
}

/// Direct evaluation of G_si at one delay τ = m·dt, O(N).
inline double direct_gsi_at(const spdc::SpectralAmplitude& f, std::int64_t m) {
  const std::size_t n = f.size();
  const auto nn = static_cast<std::int64_t>(n);
  cplx acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::int64_t idx = (((static_cast<std::int64_t>(k) - nn / 2) * m) % nn + nn) % nn;
    const double phase = -kTwoPi * static_cast<double>(idx) / static_cast<double>(n);
    acc += f.values()[k] * cplx(std::cos(phase), std::sin(phase));
  }
  return std::norm(f.grid().step * acc);
}

/// Grid-exact one-pole amplitude dt/(1 − e^{−γdt} e^{iν dt}); its discrete
/// transform is Θ(τ) e^{−γτ}.
inline cplx one_pole(double nu, double gamma, double dt) {
  return dt / (1.0 - std::exp(-gamma * dt) * std::polar(1.0, nu * dt));
}

/// max|a − b| / max|b|.
inline double max_rel_error(std::span<const double> a, std::span<const double> b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(b[i]));
  }
  return diff / scale;
}

/// Naive O(n·m) start-stop correlation with −window ≤ Δt < window.
inline std::vector<double> naive_pairs(std::span<const std::int64_t> ref,
                                       std::span<const std::int64_t> target, std::int64_t window,
                                       std::int64_t bin) {
  const auto nbins = static_cast<std::size_t>((2 * window + bin - 1) / bin);
  std::vector<double> hist(nbins, 0.0);
  for (const auto r : ref) {
    for (const auto t : target) {
      const std::int64_t d = t - r;
      if (d >= -window && d < window) hist[static_cast<std::size_t>((d + window) / bin)] += 1.0;
    }
  }
  return hist;
}

/// Zero-padded direct convolution, out[i] = Σ_j in[j]·kernel[i − j + K].
inline std::vector<double> naive_convolve(std::span<const double> in,
                                          std::span<const double> kernel) {
  const auto half = static_cast<std::int64_t>(kernel.size() / 2);
  const auto n = static_cast<std::int64_t>(in.size());
  std::vector<double> out(in.size(), 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = std::max<std::int64_t>(0, i - half);
         j <= std::min<std::int64_t>(n - 1, i + half); ++j) {
      out[static_cast<std::size_t>(i)] += in[static_cast<std::size_t>(j)] *
                                          kernel[static_cast<std::size_t>(i - j + half)];
    }
  }
  return out;
}

/// Strict interior local maxima of v in [lo, hi] above threshold.
inline int local_maxima(std::span<const double> v, std::size_t lo, std::size_t hi,
                        double threshold = 0.0) {
  int count = 0;
  for (std::size_t i = std::max<std::size_t>(lo, 1); i <= hi && i + 1 < v.size(); ++i) {
    if (v[i] > v[i - 1] && v[i] > v[i + 1] && v[i] > threshold) ++count;
  }
  return count;
}

/// Index of the largest value of v in [lo, hi].
inline std::size_t argmax(std::span<const double> v, std::size_t lo, std::size_t hi) {
  std::size_t best = lo;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

/// Position of τ = m·dt on a centred trace of length n.
inline std::size_t position_of(std::int64_t m, std::size_t n) {
  return static_cast<std::size_t>(m + static_cast<std::int64_t>(n / 2 - 1));
}

}  // namespace oracle
