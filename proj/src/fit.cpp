#include "spdc/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "spdc/errors.hpp"
#include "spdc/kernels.hpp"

namespace spdc {

namespace {

struct Profile {
  double scale;
  double offset;
  double residual;
};

Profile profile_scale_offset(std::span<const double> h, std::span<const double> m) {
  const auto n = static_cast<double>(h.size());
  double mean_h = 0.0, mean_m = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    mean_h += h[i];
    mean_m += m[i];
  }
  mean_h /= n;
  mean_m /= n;
  double smm = 0.0, smh = 0.0, m2 = 0.0, mh = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dm = m[i] - mean_m;
    smm += dm * dm;
    smh += dm * (h[i] - mean_h);
    m2 += m[i] * m[i];
    mh += m[i] * h[i];
  }
  if (!(smm > 1e-14 * m2) || !(m2 > 0.0)) throw RankError("model histogram is constant");

  double scale = smh / smm;
  double offset = mean_h - scale * mean_m;
  if (offset < 0.0) {
    offset = 0.0;
    scale = mh / m2;
  }
  if (scale < 0.0) {
    scale = 0.0;
    offset = std::max(mean_h, 0.0);
  }
  double residual = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double r = h[i] - scale * m[i] - offset;
    residual += r * r;
  }
  return {scale, offset, residual};
}

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

/// Gaussian integrated over each sample cell; continuous in sigma down to the
/// identity at sigma = 0, unlike the point-sampled instrument kernel.
std::vector<double> cell_kernel(double sigma, double truncation, double dt) {
  if (!(sigma > 0.0)) return {1.0};
  const auto half = static_cast<std::size_t>(std::ceil(truncation * sigma / dt - 1e-9));
  std::vector<double> k(2 * half + 1);
  const double scale = dt / (sigma * std::sqrt(2.0));
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double x = static_cast<double>(i) - static_cast<double>(half);
    k[i] = 0.5 * (std::erf((x + 0.5) * scale) - std::erf((x - 0.5) * scale));
  }
  double norm = 0.0;
  for (double v : k) norm += v;
  for (double& v : k) v /= norm;
  return k;
}

/// rebin(IRF ⊛ (a·ĝss + (1−a)·ĝsi)) on the axis of a histogram, reusing buffers
/// across evaluations.
class MixtureModel {
 public:
  MixtureModel(const BinnedHistogram& hist, const CorrelationTrace& gss,
               const CorrelationTrace& gsi, double truncation)
      : ss_(normalized_to_peak(gss)),
        si_(normalized_to_peak(gsi)),
        truncation_(truncation),
        mixed_(si_.values.size()),
        out_(hist.counts.size()) {
    if (hist.counts.empty()) throw ShapeError("mixture model: empty histogram");
    if (ss_.values.size() != si_.values.size() || ss_.dt != si_.dt || ss_.t0 != si_.t0) {
      throw ShapeError("mixture model: gss and gsi must share the same time axis");
    }
    // Validates alignment and range of the histogram against the trace axis.
    const auto probe = convolve_and_rebin(si_, {}, hist.bin_width, hist.t0, hist.counts.size());
    factor_ = samples_per_bin(si_.dt, hist.bin_width);
    first_ = static_cast<std::size_t>(std::llround((probe.t0 - si_.t0) / si_.dt));
    t0_ = probe.t0;
  }

  const std::vector<double>& operator()(double a, double sigma) {
    for (std::size_t i = 0; i < mixed_.size(); ++i) {
      mixed_[i] = a * ss_.values[i] + (1.0 - a) * si_.values[i];
    }
    kernels::convolve_bin(mixed_, cell_kernel(sigma, truncation_, si_.dt), factor_, first_, out_);
    return out_;
  }

  double t0() const { return t0_; }

 private:
  CorrelationTrace ss_;
  CorrelationTrace si_;
  double truncation_;
  std::vector<double> mixed_;
  std::vector<double> out_;
  std::size_t factor_ = 1;
  std::size_t first_ = 0;
  double t0_ = 0.0;
};

}  // namespace

std::string FitResult::to_key_value() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "scale=%.17g\noffset=%.17g\na=%.17g\nb=%.17g\nirf_sigma=%.17g\n"
                "residual_norm=%.17g\niterations=%d\nconverged=%s\nidentifiable=%s\n",
                scale, offset, a, b, irf_sigma, residual_norm, iterations,
                converged ? "true" : "false", identifiable ? "true" : "false");
  return buf;
}

FitResult fit_scale_offset(const BinnedHistogram& hist, const BinnedHistogram& model) {
  if (hist.counts.size() != model.counts.size() ||
      std::abs(hist.bin_width - model.bin_width) > 1e-9 * hist.bin_width ||
      std::abs(hist.t0 - model.t0) > 1e-6 * hist.bin_width) {
    throw ShapeError("fit_scale_offset: histogram and model axes differ");
  }
  if (hist.counts.empty()) throw ShapeError("fit_scale_offset: empty histogram");
  const Profile p = profile_scale_offset(hist.counts, model.counts);
  FitResult result;
  result.scale = p.scale;
  result.offset = p.offset;
  result.residual_norm = p.residual;
  result.converged = true;
  result.history = {p.residual};
  return result;
}

BinnedHistogram mixture_model(const BinnedHistogram& hist, const CorrelationTrace& gss,
                              const CorrelationTrace& gsi, double a,
                              const InstrumentResponse& irf) {
  irf.validate();
  MixtureWeights::from_a(a);
  MixtureModel model(hist, gss, gsi, irf.truncation);
  return {model.t0(), hist.bin_width, model(a, irf.sigma)};
}

FitResult fit_mixture(const BinnedHistogram& hist, const CorrelationTrace& gss,
                      const CorrelationTrace& gsi, const InstrumentResponse& irf_init,
                      const MixtureFitOptions& options) {
  irf_init.validate();
  MixtureModel model(hist, gss, gsi, irf_init.truncation);

  const double sigma_unit = hist.bin_width;
  const double sigma0 = irf_init.sigma > 0.0 ? irf_init.sigma : 2.0 * hist.bin_width;
  const double v_max = std::log(static_cast<double>(hist.counts.size()));
  auto sigma_of = [&](double v) { return sigma_unit * std::exp(std::clamp(v, -30.0, v_max)); };

  auto evaluate = [&](double a, double sigma) {
    return profile_scale_offset(hist.counts, model(a, sigma));
  };
  auto objective = [&](const std::array<double, 2>& x) {
    return evaluate(logistic(x[0]), sigma_of(x[1])).residual;
  };

  // Nelder–Mead in (logit a, log(σ/bin_width)).
  using Point = std::array<double, 2>;
  const double u0 = std::log(options.initial_a / (1.0 - options.initial_a));
  const double v0 = std::log(sigma0 / sigma_unit);
  std::array<Point, 3> simplex{Point{u0, v0}, Point{u0 + 1.0, v0}, Point{u0, v0 + 0.5}};
  std::array<double, 3> value{};
  for (int i = 0; i < 3; ++i) value[i] = objective(simplex[i]);

  FitResult result;
  int iteration = 0;
  bool small = false;
  auto order = [&] {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int l, int r) { return value[l] < value[r]; });
    std::array<Point, 3> s{simplex[idx[0]], simplex[idx[1]], simplex[idx[2]]};
    std::array<double, 3> v{value[idx[0]], value[idx[1]], value[idx[2]]};
    simplex = s;
    value = v;
  };
  auto diameter = [&] {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        d = std::max(d, std::hypot(simplex[i][0] - simplex[j][0], simplex[i][1] - simplex[j][1]));
      }
    }
    return d;
  };

  order();
  while (iteration < options.max_iterations) {
    if (diameter() < options.tolerance) {
      small = true;
      break;
    }
    ++iteration;
    const Point centroid{0.5 * (simplex[0][0] + simplex[1][0]),
                         0.5 * (simplex[0][1] + simplex[1][1])};
    auto along = [&](double t) {
      return Point{centroid[0] + t * (simplex[2][0] - centroid[0]),
                   centroid[1] + t * (simplex[2][1] - centroid[1])};
    };
    const Point reflected = along(-1.0);
    const double f_r = objective(reflected);
    if (f_r < value[0]) {
      const Point expanded = along(-2.0);
      const double f_e = objective(expanded);
      if (f_e < f_r) {
        simplex[2] = expanded;
        value[2] = f_e;
      } else {
        simplex[2] = reflected;
        value[2] = f_r;
      }
    } else if (f_r < value[1]) {
      simplex[2] = reflected;
      value[2] = f_r;
    } else {
      const bool outside = f_r < value[2];
      const Point contracted = along(outside ? -0.5 : 0.5);
      const double f_c = objective(contracted);
      if (f_c < (outside ? f_r : value[2])) {
        simplex[2] = contracted;
        value[2] = f_c;
      } else {
        for (int i = 1; i < 3; ++i) {
          simplex[i] = Point{simplex[0][0] + 0.5 * (simplex[i][0] - simplex[0][0]),
                             simplex[0][1] + 0.5 * (simplex[i][1] - simplex[0][1])};
          value[i] = objective(simplex[i]);
        }
      }
    }
    order();
    result.history.push_back(value[0]);
  }

  const double a = logistic(simplex[0][0]);
  const double sigma = sigma_of(simplex[0][1]);
  const Profile best = evaluate(a, sigma);
  result.a = a;
  result.b = 1.0 - a;
  result.irf_sigma = sigma;
  result.scale = best.scale;
  result.offset = best.offset;
  result.residual_norm = best.residual;
  result.iterations = iteration;

  // Flat objective in a: the two components are indistinguishable here.
  const double r0 = evaluate(0.0, sigma).residual;
  const double r1 = evaluate(1.0, sigma).residual;
  result.identifiable =
      std::abs(r1 - r0) > 1e-9 * (r0 + r1) + std::numeric_limits<double>::min();
  result.converged = small && result.identifiable;
  return result;
}

}  // namespace spdc
