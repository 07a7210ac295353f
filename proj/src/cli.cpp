#include "spdc/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>

#include "spdc/coincidence.hpp"
#include "spdc/correlator.hpp"
#include "spdc/errors.hpp"
#include "spdc/fit.hpp"
#include "spdc/instrument.hpp"
#include "spdc/oracle_mc.hpp"
#include "spdc/run_config.hpp"
#include "spdc/spectral_model.hpp"

namespace spdc {

namespace {

struct Globals {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  double bin = 0.0;
  double irf_sigma = 0.0;
  double window = 0.0;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* bin_opt = nullptr;
  CLI::Option* irf_opt = nullptr;
  CLI::Option* window_opt = nullptr;
};

struct Commands {
  std::string g2_kind = "si";
  double a = 0.0;
  CLI::Option* a_opt = nullptr;
  std::string in_path;
  std::string mode = "1d";
  std::string hist_path;
  std::string fit_kind = "mix";
};

RunConfig load_config(const Globals& g) {
  RunConfig cfg = g.config_path.empty() ? RunConfig::desk() : RunConfig::load(g.config_path);
  if (g.seed_opt->count() > 0) cfg.seed = g.seed;
  if (g.bin_opt->count() > 0) cfg.bin_width = g.bin;
  if (g.irf_opt->count() > 0) cfg.irf.sigma = g.irf_sigma;
  if (g.window_opt->count() > 0) cfg.window = g.window;
  cfg.require(RunConfig::source_keys());
  cfg.validate();
  return cfg;
}

/// Sends text output to --out, or to the console stream when absent.
void emit(const Globals& g, std::ostream& console, const std::function<void(std::ostream&)>& body,
          std::ios::openmode mode = std::ios::out) {
  if (g.out_path.empty() || g.out_path == "-") {
    body(console);
    return;
  }
  std::ofstream file(g.out_path, mode | std::ios::trunc);
  if (!file) throw ConfigError("cannot open --out path '" + g.out_path + "'");
  body(file);
  file.flush();
  if (!file) throw ConfigError("failed writing '" + g.out_path + "'");
}

std::ifstream open_input(const std::string& path, const char* flag, bool binary = false) {
  if (path.empty()) throw ConfigError(std::string("missing ") + flag + " path");
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw ConfigError(std::string("cannot open ") + flag + " path '" + path + "'");
  return in;
}

SpectralAmplitude model_of(const RunConfig& cfg) {
  return build_phase_matching(cfg.source, cfg.grid());
}

/// Crop to the output range, apply the IRF and optional binning.
CorrelationTrace finish_trace(const CorrelationTrace& trace, const RunConfig& cfg, bool binned) {
  const double h = cfg.output_half_range;
  const double margin = cfg.irf.sigma > 0.0 ? cfg.irf.truncation * cfg.irf.sigma + 2.0 * trace.dt
                                            : 0.0;
  CorrelationTrace work = h > 0.0 ? trace.crop(-h - margin, h + margin) : trace;
  if (cfg.irf.sigma > 0.0) work = convolve_irf(work, cfg.irf);
  if (h > 0.0) work = work.crop(-h, h);
  if (binned) {
    const auto hist = rebin(work, cfg.bin_width);
    return {hist.t0, hist.bin_width, hist.counts};
  }
  return work;
}

int cmd_model(const Globals& g, std::ostream& out) {
  const RunConfig cfg = load_config(g);
  const auto f = model_of(cfg);
  emit(g, out, [&](std::ostream& s) { write_spectral_csv(s, f); });
  return kExitOk;
}

int cmd_g2(const Globals& g, const Commands& c, std::ostream& out) {
  RunConfig cfg = load_config(g);
  if (c.a_opt->count() > 0) {
    cfg.mix_a = c.a;
    cfg.validate();
  }
  const bool binned = g.bin_opt->count() > 0;
  const auto f = model_of(cfg);

  if (c.g2_kind == "si" || c.g2_kind == "ss" || c.g2_kind == "mix") {
    CorrelationTrace trace;
    if (c.g2_kind == "si") {
      trace = g2_signal_idler(f);
    } else if (c.g2_kind == "ss") {
      trace = g2_signal_signal(f, cfg.symmetrize_ss);
    } else {
      trace = mix_ss_si(normalized_to_peak(g2_signal_signal(f, cfg.symmetrize_ss)),
                        normalized_to_peak(g2_signal_idler(f)), MixtureWeights::from_a(cfg.mix_a));
    }
    const auto result = finish_trace(trace, cfg, binned);
    emit(g, out, [&](std::ostream& s) { write_trace_csv(s, result, "g2"); });
    return kExitOk;
  }

  // The IRF acts on each axis of a separable map, so it is applied to the trace.
  CorrelationTrace gsi = g2_signal_idler(f);
  if (cfg.irf.sigma > 0.0) gsi = convolve_irf(gsi, cfg.irf);
  const double map_bin = binned ? cfg.bin_width : cfg.map_bin_width;
  const MapRegion region{-cfg.map_half_range, cfg.map_half_range,
                         samples_per_bin(gsi.dt, map_bin)};
  const auto window = BackgroundWindow::full_axis(gsi);
  const CorrelationMap map = c.g2_kind == "ssi" ? g2_ssi_simultaneous(gsi, region)
                                                : g2_ssi_background(gsi, window, window, region);
  emit(g, out, [&](std::ostream& s) { write_map_csv(s, map); });
  return kExitOk;
}

int cmd_simulate(const Globals& g, std::ostream& out) {
  const RunConfig cfg = load_config(g);
  cfg.require({"pair_rate", "duration"});
  if (g.out_path.empty() || g.out_path == "-") {
    throw ConfigError("simulate writes a binary file and needs --out");
  }
  EmissionModel model{cfg.source, cfg.pair_rate, cfg.loss_signal, cfg.loss_idler,
                      cfg.splitter_ratio};
  model.validate();
  const DelaySampler sampler(g2_signal_idler(model_of(cfg)));
  const auto stream = simulate(model, sampler, cfg.duration, cfg.seed);
  emit(g, out, [&](std::ostream& s) { write_timetags(s, stream); }, std::ios::binary);
  out << "records=" << stream.records.size() << " duration_s=" << cfg.duration
      << " seed=" << cfg.seed << '\n';
  return kExitOk;
}

int cmd_correlate(const Globals& g, const Commands& c, std::ostream& out) {
  const RunConfig cfg = load_config(g);
  auto in = open_input(c.in_path, "--in", true);
  const auto stream = read_timetags(in);
  CorrelationConfig cc;
  cc.window = cfg.window;
  cc.bin_width = cfg.bin_width;
  cc.reference = Channel::Idler;
  if (c.mode == "1d") {
    cc.targets = {Channel::Signal1};
    const auto hist = correlate_1d(stream, cc);
    emit(g, out, [&](std::ostream& s) { write_histogram_csv(s, hist); });
  } else {
    cc.targets = {Channel::Signal1, Channel::Signal2};
    const auto hist = correlate_2d(stream, cc);
    emit(g, out, [&](std::ostream& s) { write_histogram_csv(s, hist); });
  }
  return kExitOk;
}

int cmd_fit(const Globals& g, const Commands& c, std::ostream& out) {
  const RunConfig cfg = load_config(g);
  auto in = open_input(c.hist_path, "--hist");
  const auto hist = read_histogram_csv(in);
  const auto f = model_of(cfg);
  const auto gsi = g2_signal_idler(f);
  FitResult result;
  if (c.fit_kind == "si") {
    const auto model = convolve_and_rebin(normalized_to_peak(gsi), cfg.irf, hist.bin_width,
                                          hist.t0, hist.counts.size());
    result = fit_scale_offset(hist, model);
    result.a = 0.0;
    result.b = 1.0;
    result.irf_sigma = cfg.irf.sigma;
  } else {
    result = fit_mixture(hist, g2_signal_signal(f, cfg.symmetrize_ss), gsi, cfg.irf);
  }
  const std::string block = result.to_key_value();
  out << block;
  if (!g.out_path.empty() && g.out_path != "-") {
    emit(g, out, [&](std::ostream& s) { s << block; });
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Correlation functions of a cavity-enhanced SPDC photon-pair source"};
  app.footer(describe_config_keys() +
             "\nWithout --config the built-in desk source is used.\n"
             "Exit codes: 0 ok, 2 configuration, 3 numerical, 4 file format.");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "key = value configuration file");
  app.add_option("--out", g.out_path, "output file (default: console)");
  g.seed_opt = app.add_option("--seed", g.seed, "random seed, overrides `seed`");
  g.bin_opt = app.add_option("--bin", g.bin, "bin width in seconds, overrides `bin_width`");
  g.irf_opt = app.add_option("--irf-sigma", g.irf_sigma, "IRF RMS width in seconds");
  g.window_opt = app.add_option("--window", g.window, "coincidence half window in seconds");

  Commands c;
  auto* model = app.add_subcommand("model", "write the spectral amplitude as CSV");
  auto* g2 = app.add_subcommand("g2", "write a correlation trace or 2D map as CSV");
  g2->add_option("--kind", c.g2_kind, "si | ss | mix | ssi | ssi-bg")
      ->check(CLI::IsMember({"si", "ss", "mix", "ssi", "ssi-bg"}));
  c.a_opt = g2->add_option("--a", c.a, "signal-signal weight of the mixture");
  auto* sim = app.add_subcommand("simulate", "write a Monte-Carlo time-tag file");
  auto* corr = app.add_subcommand("correlate", "histogram a time-tag file");
  corr->add_option("--in", c.in_path, "time-tag file")->required();
  corr->add_option("--mode", c.mode, "1d (idler vs signal 1) | 2d (idler vs both signals)")
      ->check(CLI::IsMember({"1d", "2d"}));
  auto* fit = app.add_subcommand("fit", "fit a measured histogram");
  fit->add_option("--hist", c.hist_path, "histogram CSV (tau_s,counts)")->required();
  fit->add_option("--kind", c.fit_kind, "si | mix")->check(CLI::IsMember({"si", "mix"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (model->parsed()) return cmd_model(g, out);
    if (g2->parsed()) return cmd_g2(g, c, out);
    if (sim->parsed()) return cmd_simulate(g, out);
    if (corr->parsed()) return cmd_correlate(g, c, out);
    if (fit->parsed()) return cmd_fit(g, c, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << '\n';
    return kExitUnexpected;
  }
  return kExitConfig;
}

}  // namespace spdc
