#include "spdc/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace spdc::kernels {

namespace {

using Index = std::ptrdiff_t;

inline double convolve_at(std::span<const double> in, std::span<const double> kernel, Index i) {
  const Index n = static_cast<Index>(in.size());
  const Index half = static_cast<Index>(kernel.size() / 2);
  const Index k_lo = std::max<Index>(0, i + half - (n - 1));
  const Index k_hi = std::min<Index>(static_cast<Index>(kernel.size()) - 1, i + half);
  double acc = 0.0;
  for (Index k = k_lo; k <= k_hi; ++k) acc += kernel[k] * in[i + half - k];
  return acc;
}

inline void convolve_col_row(std::span<const double> in, std::size_t rows, std::size_t cols,
                             std::span<const double> kernel, Index i, double* row_out) {
  const Index half = static_cast<Index>(kernel.size() / 2);
  const Index n = static_cast<Index>(rows);
  std::fill(row_out, row_out + cols, 0.0);
  const Index k_lo = std::max<Index>(0, i + half - (n - 1));
  const Index k_hi = std::min<Index>(static_cast<Index>(kernel.size()) - 1, i + half);
  for (Index k = k_lo; k <= k_hi; ++k) {
    const double w = kernel[k];
    const double* src = in.data() + (i + half - k) * static_cast<Index>(cols);
    for (std::size_t j = 0; j < cols; ++j) row_out[j] += w * src[j];
  }
}

inline double separable_at(std::span<const SeparableTerm> terms, std::size_t i, std::size_t j) {
  double acc = 0.0;
  for (const auto& t : terms) acc += t.coefficient * t.left[i] * t.right[j];
  return acc;
}

std::vector<double> summed_kernel(std::span<const double> kernel, std::size_t factor) {
  // w[d] = Σ_{s<factor} kernel[d − s], d ∈ [0, len + factor − 1).
  std::vector<double> w(kernel.size() + factor - 1, 0.0);
  for (std::size_t d = 0; d < w.size(); ++d) {
    for (std::size_t s = 0; s < factor; ++s) {
      if (d >= s && d - s < kernel.size()) w[d] += kernel[d - s];
    }
  }
  return w;
}

// First target index with time >= t.
inline std::size_t first_not_before(std::span<const std::int64_t> times, std::int64_t t) {
  return static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), t) - times.begin());
}

/// [begin, end) share of n items for the calling thread of a parallel region.
inline std::pair<std::size_t, std::size_t> thread_slice(std::size_t n) {
  const auto threads = static_cast<std::size_t>(omp_get_num_threads());
  const auto id = static_cast<std::size_t>(omp_get_thread_num());
  return {n * id / threads, n * (id + 1) / threads};
}

}  // namespace

void convolve_same(std::span<const double> in, std::span<const double> kernel,
                   std::span<double> out) {
  const Index n = static_cast<Index>(in.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) out[i] = convolve_at(in, kernel, i);
}

void convolve_rows(std::span<const double> in, std::size_t rows, std::size_t cols,
                   std::span<const double> kernel, std::span<double> out) {
  const Index n = static_cast<Index>(rows);
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < n; ++r) {
    const auto row_in = in.subspan(r * cols, cols);
    for (std::size_t j = 0; j < cols; ++j) {
      out[r * cols + j] = convolve_at(row_in, kernel, static_cast<Index>(j));
    }
  }
}

void convolve_cols(std::span<const double> in, std::size_t rows, std::size_t cols,
                   std::span<const double> kernel, std::span<double> out) {
  const Index n = static_cast<Index>(rows);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    convolve_col_row(in, rows, cols, kernel, i, out.data() + i * static_cast<Index>(cols));
  }
}

void convolve_bin(std::span<const double> in, std::span<const double> kernel, std::size_t factor,
                  std::size_t first, std::span<double> out) {
  const auto w = summed_kernel(kernel, factor);
  const Index n = static_cast<Index>(in.size());
  const Index half = static_cast<Index>(kernel.size() / 2);
  const Index nb = static_cast<Index>(out.size());
  const Index f = static_cast<Index>(factor);
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < nb; ++b) {
    // Output samples i0..i0+f−1 draw on inputs j = i + half − k.
    const Index i0 = static_cast<Index>(first) + b * f;
    const Index j_lo = std::max<Index>(0, i0 - half);
    const Index j_hi = std::min<Index>(n - 1, i0 + f - 1 + half);
    double acc = 0.0;
    for (Index j = j_lo; j <= j_hi; ++j) acc += w[i0 + f - 1 + half - j] * in[j];
    out[b] = acc;
  }
}

void assemble_separable(std::span<const SeparableTerm> terms, std::size_t rows, std::size_t cols,
                        std::span<double> out) {
  const Index n = static_cast<Index>(rows);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      out[i * cols + j] = separable_at(terms, static_cast<std::size_t>(i), j);
    }
  }
}

void correlate_pairs(std::span<const std::int64_t> ref, std::span<const std::int64_t> target,
                     std::int64_t window, std::int64_t bin, std::span<double> hist) {
  std::fill(hist.begin(), hist.end(), 0.0);
#pragma omp parallel
  {
    // Contiguous slice of references per thread; one search, then a running cursor.
    const auto [begin, end] = thread_slice(ref.size());
    std::vector<double> local(hist.size(), 0.0);
    std::size_t lo = begin < end ? first_not_before(target, ref[begin] - window) : 0;
    for (std::size_t r = begin; r < end; ++r) {
      const std::int64_t t = ref[r];
      while (lo < target.size() && target[lo] < t - window) ++lo;
      for (std::size_t k = lo; k < target.size() && target[k] < t + window; ++k) {
        local[static_cast<std::size_t>((target[k] - t + window) / bin)] += 1.0;
      }
    }
#pragma omp critical(spdc_correlate_pairs)
    for (std::size_t b = 0; b < hist.size(); ++b) hist[b] += local[b];
  }
}

void correlate_triples(std::span<const std::int64_t> ref, std::span<const std::int64_t> target1,
                       std::span<const std::int64_t> target2, std::int64_t window,
                       std::int64_t bin, std::size_t nbins, std::span<double> hist) {
  std::fill(hist.begin(), hist.end(), 0.0);
#pragma omp parallel
  {
    const auto [begin, end] = thread_slice(ref.size());
    std::vector<double> local(hist.size(), 0.0);
    std::size_t lo1 = begin < end ? first_not_before(target1, ref[begin] - window) : 0;
    std::size_t lo2 = begin < end ? first_not_before(target2, ref[begin] - window) : 0;
    for (std::size_t r = begin; r < end; ++r) {
      const std::int64_t t = ref[r];
      while (lo1 < target1.size() && target1[lo1] < t - window) ++lo1;
      while (lo2 < target2.size() && target2[lo2] < t - window) ++lo2;
      std::size_t hi1 = lo1;
      while (hi1 < target1.size() && target1[hi1] < t + window) ++hi1;
      if (hi1 == lo1) continue;
      std::size_t hi2 = lo2;
      while (hi2 < target2.size() && target2[hi2] < t + window) ++hi2;
      for (std::size_t a = lo1; a < hi1; ++a) {
        const auto b1 = static_cast<std::size_t>((target1[a] - t + window) / bin);
        for (std::size_t b = lo2; b < hi2; ++b) {
          local[b1 * nbins + static_cast<std::size_t>((target2[b] - t + window) / bin)] += 1.0;
        }
      }
    }
#pragma omp critical(spdc_correlate_triples)
    for (std::size_t b = 0; b < hist.size(); ++b) hist[b] += local[b];
  }
}

namespace reference {

void convolve_same(std::span<const double> in, std::span<const double> kernel,
                   std::span<double> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = convolve_at(in, kernel, static_cast<Index>(i));
}

void convolve_rows(std::span<const double> in, std::size_t rows, std::size_t cols,
                   std::span<const double> kernel, std::span<double> out) {
  for (std::size_t r = 0; r < rows; ++r) {
    reference::convolve_same(in.subspan(r * cols, cols), kernel, out.subspan(r * cols, cols));
  }
}

void convolve_cols(std::span<const double> in, std::size_t rows, std::size_t cols,
                   std::span<const double> kernel, std::span<double> out) {
  for (std::size_t i = 0; i < rows; ++i) {
    convolve_col_row(in, rows, cols, kernel, static_cast<Index>(i), out.data() + i * cols);
  }
}

void convolve_bin(std::span<const double> in, std::span<const double> kernel, std::size_t factor,
                  std::size_t first, std::span<double> out) {
  for (std::size_t b = 0; b < out.size(); ++b) {
    double acc = 0.0;
    for (std::size_t s = 0; s < factor; ++s) {
      acc += convolve_at(in, kernel, static_cast<Index>(first + b * factor + s));
    }
    out[b] = acc;
  }
}

void assemble_separable(std::span<const SeparableTerm> terms, std::size_t rows, std::size_t cols,
                        std::span<double> out) {
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out[i * cols + j] = separable_at(terms, i, j);
  }
}

void correlate_pairs(std::span<const std::int64_t> ref, std::span<const std::int64_t> target,
                     std::int64_t window, std::int64_t bin, std::span<double> hist) {
  std::fill(hist.begin(), hist.end(), 0.0);
  std::size_t lo = 0;
  for (const std::int64_t t : ref) {
    while (lo < target.size() && target[lo] < t - window) ++lo;
    for (std::size_t k = lo; k < target.size() && target[k] < t + window; ++k) {
      hist[static_cast<std::size_t>((target[k] - t + window) / bin)] += 1.0;
    }
  }
}

void correlate_triples(std::span<const std::int64_t> ref, std::span<const std::int64_t> target1,
                       std::span<const std::int64_t> target2, std::int64_t window,
                       std::int64_t bin, std::size_t nbins, std::span<double> hist) {
  std::fill(hist.begin(), hist.end(), 0.0);
  std::size_t lo1 = 0;
  std::size_t lo2 = 0;
  for (const std::int64_t t : ref) {
    while (lo1 < target1.size() && target1[lo1] < t - window) ++lo1;
    while (lo2 < target2.size() && target2[lo2] < t - window) ++lo2;
    for (std::size_t a = lo1; a < target1.size() && target1[a] < t + window; ++a) {
      const auto b1 = static_cast<std::size_t>((target1[a] - t + window) / bin);
      for (std::size_t b = lo2; b < target2.size() && target2[b] < t + window; ++b) {
        hist[b1 * nbins + static_cast<std::size_t>((target2[b] - t + window) / bin)] += 1.0;
      }
    }
  }
}

}  // namespace reference

}  // namespace spdc::kernels
