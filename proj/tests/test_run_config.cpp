#include <doctest.h>

#include <sstream>
#include <string>

#include "spdc/errors.hpp"
#include "spdc/run_config.hpp"

using namespace spdc;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return RunConfig::parse(in);
}

std::string error_of(const std::string& text) {
  try {
    parse(text).validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("shipped desk config matches the built-in desk source") {
  const auto cfg = RunConfig::load(SPDC_CONFIG_DIR "/desk.cfg");
  CHECK_NOTHROW(cfg.require(RunConfig::source_keys()));
  CHECK_NOTHROW(cfg.validate());
  const auto d = SourceParams::desk();
  CHECK(cfg.source.signal_center_frequency == doctest::Approx(d.signal_center_frequency).epsilon(1e-15));
  CHECK(cfg.source.pump_angular_frequency == doctest::Approx(d.pump_angular_frequency).epsilon(1e-15));
  CHECK(cfg.source.roundtrip_time_signal == d.roundtrip_time_signal);
  CHECK(cfg.source.finesse_idler == d.finesse_idler);
  CHECK(cfg.source.pm_sinc_halfwidth == doctest::Approx(d.pm_sinc_halfwidth).epsilon(1e-15));
  CHECK(cfg.pair_rate == 1e6);
  CHECK(cfg.seed == 1);

  const auto b = RunConfig::load(SPDC_CONFIG_DIR "/birefringent.cfg");
  CHECK(b.source.roundtrip_time_idler == SourceParams::birefringent_desk().roundtrip_time_idler);
  CHECK(b.source.birefringent_pass_delay == 4e-12);
}

TEST_CASE("comments, blank lines and spacing") {
  const auto cfg = parse("# header\n\n  mix_a=0.5   # trailing\nseed = 99\r\nsymmetrize_ss = true\n");
  CHECK(cfg.mix_a == 0.5);
  CHECK(cfg.seed == 99);
  CHECK(cfg.symmetrize_ss);
  CHECK(cfg.present == std::set<std::string>{"mix_a", "seed", "symmetrize_ss"});
  CHECK(cfg.bin_width == 50e-12);
  CHECK(cfg.window == 20e-9);
}

TEST_CASE("errors name the offending key") {
  CHECK(error_of("bogus_key = 1\n").find("bogus_key") != std::string::npos);
  CHECK(error_of("mix_a = 0.1\nmix_a = 0.2\n").find("mix_a") != std::string::npos);
  CHECK(error_of("window = abc\n").find("window") != std::string::npos);
  CHECK(error_of("window = 1e999\n").find("window") != std::string::npos);
  CHECK(error_of("window =\n").find("window") != std::string::npos);
  CHECK(error_of("seed = -3\n").find("seed") != std::string::npos);
  CHECK(error_of("just text\n").find("line 1") != std::string::npos);

  auto cfg = RunConfig::desk();
  cfg.irf.sigma = -1.0;
  try {
    cfg.validate();
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("irf_sigma") != std::string::npos);
  }
  cfg = RunConfig::desk();
  cfg.bin_width = cfg.window;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("/nonexistent/x.cfg"), ConfigError);
}

TEST_CASE("missing required keys") {
  const auto cfg = parse("pump_angular_frequency = 4e15\nsignal_center_frequency = 2e15\n");
  try {
    cfg.require(RunConfig::source_keys());
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("roundtrip_time_signal") != std::string::npos);
  }
  CHECK_NOTHROW(RunConfig::desk().require(RunConfig::source_keys()));
  CHECK_THROWS_AS(RunConfig::desk().require({"pair_rate"}), ConfigError);
}

TEST_CASE("every documented key is accepted and listed with a unit") {
  const std::string help = describe_config_keys();
  for (const auto& k : RunConfig::keys()) {
    CAPTURE(k.name);
    CHECK_NOTHROW(parse(std::string(k.name) + " = 1\n"));
    CHECK(help.find(k.name) != std::string::npos);
    CHECK(std::string(k.unit).size() > 0);
  }
  for (const auto key : RunConfig::source_keys()) {
    bool documented = false;
    for (const auto& k : RunConfig::keys()) documented |= key == k.name;
    CHECK(documented);
  }
}

TEST_CASE("grid follows the config") {
  auto cfg = RunConfig::desk();
  cfg.grid_count = 1 << 12;
  const auto g = cfg.grid();
  CHECK(g.count == 4096);
  CHECK(g.time_step() == doctest::Approx(1e-12));
  CHECK(g.center == cfg.source.signal_center_frequency);
}
