#pragma once

#include <complex>
#include <span>
#include <vector>

namespace spdc::fft {

/// Unnormalized forward DFT, Y_j = Σ_k x_k e^{−2πi·jk/N}. Thread-safe.
std::vector<std::complex<double>> forward(std::span<const std::complex<double>> input);

}  // namespace spdc::fft
