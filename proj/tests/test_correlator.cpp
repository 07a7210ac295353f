#include <doctest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "spdc/correlator.hpp"
#include "spdc/errors.hpp"

using namespace spdc;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralAmplitude desk_on(std::size_t n, SourceParams p = SourceParams::desk()) {
  return build_phase_matching(p, FrequencyGrid::centered_on(p.signal_center_frequency, n));
}

SpectralAmplitude from_function(std::size_t n, double step,
                                const std::function<std::complex<double>(double)>& fn) {
  const auto grid = FrequencyGrid::centered_on(SourceParams::desk().signal_center_frequency, n, step);
  std::vector<std::complex<double>> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = fn(grid.detuning(k));
  return SpectralAmplitude(grid, std::move(v));
}

CorrelationTrace small_trace(std::vector<double> v, double dt = 1e-12) {
  const auto n = v.size();
  return {-static_cast<double>(n / 2 - 1) * dt, dt, std::move(v)};
}

/// Map region covering every sample of trace.
MapRegion full_region(const CorrelationTrace& t, std::size_t factor = 1) {
  return {t.t0 - 0.5 * t.dt, t.axis().last() + 0.5 * t.dt, factor};
}

}  // namespace

TEST_CASE("signal-idler time axis is centred with dt = 2pi/(N dw)") {
  const auto f = desk_on(1 << 12);
  const auto g = g2_signal_idler(f);
  CHECK(g.values.size() == f.size());
  CHECK(g.dt == doctest::Approx(2.0 * kPi / (f.size() * f.grid().step)).epsilon(1e-15));
  CHECK(g.t0 == doctest::Approx(-(static_cast<double>(f.size() / 2) - 1.0) * g.dt).epsilon(1e-15));
  CHECK_NOTHROW(g.validate());
}

TEST_CASE("constant spectrum gives a discrete delta at zero delay") {
  const auto f = from_function(1 << 10, 2.0 * kPi * 1e9, [](double) { return 1.0; });
  const auto g = g2_signal_idler(f);
  const std::size_t zero = oracle::position_of(0, g.values.size());
  const double total = std::accumulate(g.values.begin(), g.values.end(), 0.0);
  CHECK(g.values[zero] == doctest::Approx(total).epsilon(1e-12));
  CHECK(g.values[zero] == doctest::Approx(std::pow(1024 * f.grid().step, 2)).epsilon(1e-12));
}

TEST_CASE("Parseval identities on small grids") {
  for (const auto& p : {SourceParams::desk(), SourceParams::birefringent_desk()}) {
    const auto f = desk_on(1 << 14, p);
    double e1 = 0.0, e2 = 0.0;
    for (const auto& v : f.values()) {
      e1 += std::norm(v);
      e2 += std::norm(v * v);
    }
    const double dw = f.grid().step;
    const auto gsi = g2_signal_idler(f);
    const auto gss = g2_signal_signal(f);
    const double s1 = std::accumulate(gsi.values.begin(), gsi.values.end(), 0.0) * gsi.dt;
    const double s2 = std::accumulate(gss.values.begin(), gss.values.end(), 0.0) * gss.dt;
    CHECK(s1 == doctest::Approx(2.0 * kPi * dw * e1).epsilon(1e-9));
    CHECK(s2 == doctest::Approx(4.0 * 2.0 * kPi * dw * e2).epsilon(1e-9));
  }
}

TEST_CASE("DFT traces match direct quadrature on 4096 points") {
  for (const auto& p : {SourceParams::desk(), SourceParams::birefringent_desk()}) {
    const auto f = desk_on(1 << 12, p);
    CHECK(oracle::max_rel_error(g2_signal_idler(f).values, oracle::direct_gsi(f)) < 1e-6);
    CHECK(oracle::max_rel_error(g2_signal_signal(f).values, oracle::direct_gss(f)) < 1e-6);
  }
}

TEST_CASE("one-pole amplitude gives a one-sided exponential") {
  const double dt = 1e-12;
  const std::size_t n = 1 << 16;
  const double gamma = 2.0 * kPi * 50e6 * 100.0;
  const auto f = from_function(n, 2.0 * kPi / (n * dt),
                               [&](double nu) { return oracle::one_pole(nu, gamma, dt); });
  const auto g = g2_signal_idler(f);
  const std::size_t zero = oracle::position_of(0, n);
  const double g0 = g.values[zero];
  const auto m_max = static_cast<std::int64_t>(5.0 / (2.0 * gamma) / dt);
  double worst = 0.0;
  for (std::int64_t m = 0; m <= m_max; ++m) {
    const double expect = std::exp(-2.0 * gamma * static_cast<double>(m) * dt);
    worst = std::max(worst, std::abs(g.values[oracle::position_of(m, n)] / g0 - expect) / expect);
  }
  CHECK(worst < 1e-6);
  CHECK(g.values[oracle::position_of(-5, n)] < 1e-20 * g0);
}

TEST_CASE("grid-exact one-pole tends to the continuous Lorentzian") {
  const double dt = 1e-12, gamma = 2.0 * kPi * 50e6;
  for (double nu : {0.0, 1e8, -3e9, 2e10}) {
    const auto lorentz = 1.0 / std::complex<double>(gamma, -nu);
    const auto grid = oracle::one_pole(nu, gamma, dt);
    CHECK(std::abs(grid - lorentz) / std::abs(lorentz) < 0.02 + std::abs(nu) * dt);
  }
}

TEST_CASE("signal-signal of a one-pole matches quadrature") {
  const double dt = 1e-12;
  const std::size_t n = 1 << 12;
  const double gamma = 2.0 * kPi * 5e9;
  const auto f = from_function(n, 2.0 * kPi / (n * dt),
                               [&](double nu) { return oracle::one_pole(nu, gamma, dt); });
  CHECK(oracle::max_rel_error(g2_signal_signal(f).values, oracle::direct_gss(f)) < 1e-6);
}

TEST_CASE("real even spectrum gives an even signal-signal trace") {
  const std::size_t n = 1 << 12;
  const auto f = from_function(n, 2.0 * kPi * 1e9, [](double nu) {
    const double x = nu / (2.0 * kPi * 50e9);
    return std::exp(-x * x) * (1.0 + 0.3 * std::cos(nu * 1e-10));
  });
  const auto g = g2_signal_signal(f);
  const double peak = *std::max_element(g.values.begin(), g.values.end());
  double worst = 0.0;
  for (std::size_t p = 0; p + 2 <= n; ++p) {
    worst = std::max(worst, std::abs(g.values[p] - g.values[n - 2 - p]));
  }
  CHECK(worst <= 1e-12 * peak);
}

TEST_CASE("symmetrize flag averages the mirrored trace") {
  const auto f = desk_on(1 << 12, SourceParams::birefringent_desk());
  const auto raw = g2_signal_signal(f);
  const auto sym = g2_signal_signal(f, true);
  const std::size_t n = raw.values.size();
  for (std::size_t p : {0ul, 17ul, n / 2, n - 2}) {
    CHECK(sym.values[p] == doctest::Approx(0.5 * (raw.values[p] + raw.values[n - 2 - p])));
    CHECK(sym.values[p] == sym.values[n - 2 - p]);
  }
  CHECK(sym.values[n - 1] == raw.values[n - 1]);
}

TEST_CASE("desk comb: signal-idler teeth at nT, signal-signal at the same positions") {
  const auto f = desk_on(FrequencyGrid::kDefaultCount);
  const auto gsi = g2_signal_idler(f);
  const auto gss = g2_signal_signal(f);
  const std::size_t n = gsi.values.size();
  const double T = SourceParams::desk().roundtrip_time_signal;
  const auto span = static_cast<std::int64_t>(0.3 * T / gsi.dt);
  std::vector<double> heights;
  for (int k = -10; k <= 10; ++k) {
    const auto center = static_cast<std::int64_t>(std::llround(k * T / gsi.dt));
    const auto lo = oracle::position_of(center - span, n);
    const auto hi = oracle::position_of(center + span, n);
    const auto a = oracle::argmax(gsi.values, lo, hi);
    const auto b = oracle::argmax(gss.values, lo, hi);
    CHECK(std::abs(gsi.time(a) - k * T) <= gsi.dt * (1.0 + 1e-9));
    CHECK(std::abs(static_cast<double>(a) - static_cast<double>(b)) <= 1.0);
    if (k >= 1) heights.push_back(gsi.values[a]);
  }
  // Successive tooth ratio is constant and equals the direct evaluation.
  const double r12 = oracle::direct_gsi_at(f, std::llround(2 * T / gsi.dt)) /
                     oracle::direct_gsi_at(f, std::llround(T / gsi.dt));
  for (std::size_t i = 0; i + 1 < 8; ++i) {
    CHECK(std::abs(heights[i + 1] / heights[i] / r12 - 1.0) < 0.02);
  }
}

TEST_CASE("mixture weights and convex combination") {
  CHECK_THROWS_AS(MixtureWeights::make(0.6, 0.5), DomainError);
  CHECK_THROWS_AS(MixtureWeights::make(-0.1, 1.1), DomainError);
  CHECK_NOTHROW(MixtureWeights::make(0.63, 0.37));

  const auto f = desk_on(1 << 12);
  const auto gss = normalized_to_peak(g2_signal_signal(f));
  const auto gsi = normalized_to_peak(g2_signal_idler(f));
  CHECK(mix_ss_si(gss, gsi, MixtureWeights::make(1.0, 0.0)).values == gss.values);
  const auto mixed = mix_ss_si(gss, gsi, MixtureWeights::make(0.63, 0.37));
  for (std::size_t i = 0; i < mixed.values.size(); ++i) {
    const double lo = std::min(gss.values[i], gsi.values[i]);
    const double hi = std::max(gss.values[i], gsi.values[i]);
    CHECK(mixed.values[i] >= lo * (1 - 1e-15));
    CHECK(mixed.values[i] <= hi * (1 + 1e-15));
  }
  const auto same = mix_ss_si(gsi, gsi, MixtureWeights::make(0.5, 0.5));
  CHECK(oracle::max_rel_error(same.values, gsi.values) <= 1e-16);

  CHECK_THROWS_AS(mix_ss_si(g2_signal_signal(f), gsi, MixtureWeights::from_a(0.5)), DomainError);
  auto shifted = gsi;
  shifted.t0 += gsi.dt;
  CHECK_THROWS_AS(mix_ss_si(gss, shifted, MixtureWeights::from_a(0.5)), ShapeError);
  CHECK_THROWS_AS(normalized_to_peak(small_trace({0, 0, 0, 0})), ModelError);
}

TEST_CASE("simultaneous map is the outer product and symmetric") {
  const auto t = small_trace({0.0, 1.0, 3.0, 0.5, 0.0, 2.0, 0.25, 0.0});
  const auto map = g2_ssi_simultaneous(t, full_region(t));
  REQUIRE(map.axis1.count == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(map.at(i, j) == t.values[i] * t.values[j]);
      CHECK(map.at(i, j) == map.at(j, i));
    }
  }
  for (double v : map.row(0)) CHECK(v == 0.0);
  CHECK(map.axis1.t0 == t.t0);
}

TEST_CASE("binned simultaneous map equals the outer product of binned traces") {
  const auto t = small_trace({0.0, 1.0, 3.0, 0.5, 0.0, 2.0, 0.25, 0.0, 1.5});
  const auto map = g2_ssi_simultaneous(t, full_region(t, 2));
  REQUIRE(map.axis1.count == 5);
  CHECK(map.axis1.dt == 2 * t.dt);
  const std::vector<double> b{1.0, 3.5, 2.0, 0.25, 1.5};
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) CHECK(map.at(i, j) == doctest::Approx(b[i] * b[j]));
  }
}

TEST_CASE("desk simultaneous map peaks at the origin") {
  const auto f = desk_on(FrequencyGrid::kDefaultCount);
  const auto map = g2_ssi_simultaneous(f, MapRegion{-2e-9, 2e-9, 10});
  const auto it = std::max_element(map.values.begin(), map.values.end());
  const auto idx = static_cast<std::size_t>(it - map.values.begin());
  const std::size_t i = idx / map.axis2.count, j = idx % map.axis2.count;
  // The origin sample opens the bin [0, 10 dt).
  CHECK(std::abs(map.axis1.at(i)) < 1e-3 * map.axis1.dt);
  CHECK(i == j);
}

TEST_CASE("background map of a delta trace is a cross") {
  // Shift sums of a delta of height P equal P, so both stripes have height P²
  // and the origin P² + P² − P². The last sample (τ = N/2·dt) would need a
  // shift of −N/2·dt, one step beyond the axis, so its stripe entry is zero.
  const double P = 0.5;
  std::vector<double> v(16, 0.0);
  v[oracle::position_of(0, 16)] = P;
  const auto t = small_trace(v);
  const auto w = BackgroundWindow::full_axis(t);
  const auto map = g2_ssi_background(t, w, w, full_region(t));
  const std::size_t z = oracle::position_of(0, 16);
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 0; j < 16; ++j) {
      double expect = 0.0;
      if (i == z && j == z) {
        expect = P * P;
      } else if ((i == z && j != 15) || (j == z && i != 15)) {
        expect = P * P;
      }
      CHECK(map.at(i, j) == doctest::Approx(expect).epsilon(1e-15));
    }
  }
}

TEST_CASE("background map equals the unfactorized shift sum") {
  const std::size_t n = 48;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + std::sin(0.7 * i) * std::sin(0.7 * i) + (i % 5);
  const auto t = small_trace(v);
  const BackgroundWindow w1{-7.2e-12, 11.0e-12};
  const BackgroundWindow w2 = BackgroundWindow::full_axis(t);
  const auto map = g2_ssi_background(t, w1, w2, full_region(t));

  auto direct = [&](std::size_t i, std::size_t j) {
    const auto at = [&](std::int64_t k) {
      return k >= 0 && k < static_cast<std::int64_t>(n) ? v[static_cast<std::size_t>(k)] : 0.0;
    };
    double acc = 0.0;
    for (std::int64_t s = -7; s <= 11; ++s) acc += at(static_cast<std::int64_t>(i) + s) * v[j];
    const auto lo2 = std::llround(w2.t_min / t.dt), hi2 = std::llround(w2.t_max / t.dt);
    for (std::int64_t s = lo2; s <= hi2; ++s) acc += v[i] * at(static_cast<std::int64_t>(j) + s);
    return acc - v[i] * v[j];
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(map.at(i, j) == doctest::Approx(direct(i, j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero line of the background map is a stripe proportional to gsi") {
  const auto t = small_trace({0.0, 1.0, 3.0, 0.0, 0.5, 2.0, 0.0, 0.25});
  const auto w = BackgroundWindow::full_axis(t);
  const auto map = g2_ssi_background(t, w, w, full_region(t));
  const auto c = shift_sum(t, w);
  for (std::size_t i : {0ul, 3ul, 6ul}) {
    for (std::size_t j = 0; j < 8; ++j) CHECK(map.at(i, j) == doctest::Approx(c[i] * t.values[j]));
  }
}

TEST_CASE("desk background map: origin above every stripe") {
  const auto f = desk_on(FrequencyGrid::kDefaultCount);
  const auto map = g2_ssi_background(f, MapRegion{-3e-9, 3e-9, 10});
  CHECK_NOTHROW(map.validate());
  const auto z = static_cast<std::size_t>(map.axis1.nearest(0.0));
  const double origin = map.at(z, z);
  for (std::size_t i = 0; i < map.axis1.count; ++i) {
    for (std::size_t j = 0; j < map.axis2.count; ++j) {
      if (i != z || j != z) CHECK(map.at(i, j) < origin);
    }
  }
}

TEST_CASE("window and region errors") {
  const auto t = small_trace(std::vector<double>(16, 1.0));
  CHECK_THROWS_AS(shift_sum(t, BackgroundWindow{1e-12, 3e-12}), RangeError);
  CHECK_THROWS_AS(shift_sum(t, BackgroundWindow{-1e-9, 3e-12}), RangeError);
  CHECK_THROWS_AS(g2_ssi_simultaneous(t, MapRegion{-1e-9, 1e-9, 1}), RangeError);
  CHECK_THROWS_AS(g2_ssi_simultaneous(t, MapRegion{2e-12, 1e-12, 1}), RangeError);
  CHECK_THROWS_AS(g2_ssi_simultaneous(t, MapRegion{-2e-12, 2e-12, 0}), BinningError);
}

TEST_CASE("crop and CSV writers") {
  const auto t = small_trace({1, 2, 3, 4, 5, 6, 7, 8});
  const auto c = t.crop(-1e-12, 2e-12);
  CHECK(c.values == std::vector<double>{3, 4, 5});
  CHECK(c.t0 == doctest::Approx(-1e-12));

  std::stringstream s;
  write_trace_csv(s, c);
  std::string line;
  std::getline(s, line);
  CHECK(line == "tau_s,value");
  std::getline(s, line);
  double tau = 0.0, value = 0.0;
  REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &tau, &value) == 2);
  CHECK(tau == c.t0);
  CHECK(value == 3.0);

  std::stringstream m;
  write_map_csv(m, g2_ssi_simultaneous(c, full_region(c)));
  std::getline(m, line);
  CHECK(line.rfind("tau1_s\\tau2_s,", 0) == 0);
  std::size_t rows = 0;
  while (std::getline(m, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("all desk outputs are non-negative and finite") {
  const auto f = desk_on(1 << 14, SourceParams::birefringent_desk());
  CHECK_NOTHROW(g2_signal_idler(f).validate());
  CHECK_NOTHROW(g2_signal_signal(f).validate());
  CHECK_NOTHROW(g2_ssi_background(f, MapRegion{-1e-9, 1e-9, 4}).validate());
}
