#include "spdc/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace spdc::fft {

namespace {
// FFTW planning is not re-entrant; execution on distinct arrays is.
std::mutex planner_mutex;
}  // namespace

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> input) {
  const int n = static_cast<int>(input.size());
  std::vector<std::complex<double>> output(input.size());
  if (n == 0) return output;

  auto* in = fftw_alloc_complex(input.size());
  auto* out = fftw_alloc_complex(input.size());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    plan = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  std::memcpy(in, input.data(), input.size() * sizeof(fftw_complex));
  fftw_execute(plan);
  std::memcpy(static_cast<void*>(output.data()), out, input.size() * sizeof(fftw_complex));
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return output;
}

}  // namespace spdc::fft
