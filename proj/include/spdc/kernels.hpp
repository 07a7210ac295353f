#pragma once

// Data-parallel inner loops shared by the correlator, instrument and
// coincidence modules. Every kernel in spdc::kernels has a serial twin in
// spdc::kernels::reference with the same signature; the OpenMP version must
// agree with it (bitwise unless noted) and bench/ compares their speed.

#include <cstddef>
#include <cstdint>
#include <span>

namespace spdc::kernels {

/// One rank-1 term coefficient·left[i]·right[j] of a separable 2D map.
struct SeparableTerm {
  double coefficient;
  std::span<const double> left;   ///< indexed by row
  std::span<const double> right;  ///< indexed by column
};

/// out[i] = Σ_k kernel[k]·in[i + K − k], zero padded, kernel length 2K+1.
void convolve_same(std::span<const double> in, std::span<const double> kernel,
                   std::span<double> out);

/// Convolve every row of a row-major rows×cols matrix along its columns index.
void convolve_rows(std::span<const double> in, std::size_t rows, std::size_t cols,
                   std::span<const double> kernel, std::span<double> out);

/// Convolve along the row index (axis 0) of a row-major rows×cols matrix.
void convolve_cols(std::span<const double> in, std::size_t rows, std::size_t cols,
                   std::span<const double> kernel, std::span<double> out);

/// out[b] = Σ_{s<factor} convolve_same(in)[first + b·factor + s]. The summed
/// kernel is applied directly, so cost is independent of factor. Agrees with
/// convolve-then-sum to rounding, not bitwise. The addressed samples must lie
/// inside in.
void convolve_bin(std::span<const double> in, std::span<const double> kernel, std::size_t factor,
                  std::size_t first, std::span<double> out);

/// out[i·cols + j] = Σ_t term_t.coefficient·term_t.left[i]·term_t.right[j].
void assemble_separable(std::span<const SeparableTerm> terms, std::size_t rows, std::size_t cols,
                        std::span<double> out);

/// Full start-stop correlation of two sorted timestamp lists: every pair with
/// −window ≤ target − ref < window adds one count to bin (Δt + window)/bin.
void correlate_pairs(std::span<const std::int64_t> ref, std::span<const std::int64_t> target,
                     std::int64_t window, std::int64_t bin, std::span<double> hist);

/// Triple coincidences around each reference: hist[b1·nbins + b2] for every
/// (target1, target2) pair that both fall in the half-open window.
void correlate_triples(std::span<const std::int64_t> ref, std::span<const std::int64_t> target1,
                       std::span<const std::int64_t> target2, std::int64_t window,
                       std::int64_t bin, std::size_t nbins, std::span<double> hist);

namespace reference {

void convolve_same(std::span<const double> in, std::span<const double> kernel,
                   std::span<double> out);
void convolve_rows(std::span<const double> in, std::size_t rows, std::size_t cols,
                   std::span<const double> kernel, std::span<double> out);
void convolve_cols(std::span<const double> in, std::size_t rows, std::size_t cols,
                   std::span<const double> kernel, std::span<double> out);
void convolve_bin(std::span<const double> in, std::span<const double> kernel, std::size_t factor,
                  std::size_t first, std::span<double> out);
void assemble_separable(std::span<const SeparableTerm> terms, std::size_t rows, std::size_t cols,
                        std::span<double> out);
void correlate_pairs(std::span<const std::int64_t> ref, std::span<const std::int64_t> target,
                     std::int64_t window, std::int64_t bin, std::span<double> hist);
void correlate_triples(std::span<const std::int64_t> ref, std::span<const std::int64_t> target1,
                       std::span<const std::int64_t> target2, std::int64_t window,
                       std::int64_t bin, std::size_t nbins, std::span<double> hist);

}  // namespace reference

}  // namespace spdc::kernels
