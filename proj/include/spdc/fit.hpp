#pragma once

#include <string>
#include <vector>

#include "spdc/correlator.hpp"
#include "spdc/instrument.hpp"

namespace spdc {

struct FitResult {
  double scale = 0.0;   ///< counts per model unit
  double offset = 0.0;  ///< counts per bin
  double a = 1.0;
  double b = 0.0;
  double irf_sigma = 0.0;
  double residual_norm = 0.0;  ///< sum of squared residuals
  int iterations = 0;
  bool converged = false;
  /// False when the data cannot distinguish the mixture components.
  bool identifiable = true;
  /// Best objective after each optimizer iteration.
  std::vector<double> history;

  /// Flat `key=value` lines.
  std::string to_key_value() const;
};

/// Linear least squares for hist ≈ scale·model + offset with offset ≥ 0.
/// Throws ShapeError on axis mismatch and RankError for a constant model.
FitResult fit_scale_offset(const BinnedHistogram& hist, const BinnedHistogram& model);

struct MixtureFitOptions {
  double tolerance = 1e-4;  ///< simplex diameter in (logit a, log σ) coordinates
  int max_iterations = 500;
  double initial_a = 0.5;
};

/// Nelder–Mead over (a, irf sigma) of hist ≈ scale·rebin(IRF ⊛ (a·ĝss + (1−a)·ĝsi)) + offset,
/// with ĝ the peak-normalized traces and (scale, offset) profiled in closed form.
/// irf_init.sigma seeds the width (2× bin width when zero); the IRF is a
/// Gaussian integrated over each sample, so sigma may reach 0. Never throws on
/// non-convergence; reports converged = false instead.
FitResult fit_mixture(const BinnedHistogram& hist, const CorrelationTrace& gss,
                      const CorrelationTrace& gsi, const InstrumentResponse& irf_init,
                      const MixtureFitOptions& options = {});

/// The fitted curve: the model evaluated by fit_mixture for given a and IRF on
/// the axis of hist.
BinnedHistogram mixture_model(const BinnedHistogram& hist, const CorrelationTrace& gss,
                              const CorrelationTrace& gsi, double a,
                              const InstrumentResponse& irf);

}  // namespace spdc
