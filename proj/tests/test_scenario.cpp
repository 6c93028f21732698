#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "fluxsim/errors.hpp"
#include "fluxsim/scenario.hpp"
#include "support/oracles.hpp"

using namespace fluxsim;

namespace {

bool contains(const std::string& s, const std::string& needle) {
  return s.find(needle) != std::string::npos;
}

std::string parse_error(const std::string& text) {
  return oracles::thrown_message<ConfigError>([&] { (void)parse_config(text); });
}

} // namespace

TEST_CASE("empty text reproduces the default scenario") {
  const ScenarioConfig dflt = default_config();
  const ScenarioConfig parsed = parse_config("");
  CHECK(parsed.canonical_text() == dflt.canonical_text());
  CHECK(parsed.config_hash() == dflt.config_hash());
  // frozen: any change to defaults or canonicalization shows up here
  CHECK(dflt.config_hash() == 0x98607a0089722b1aull);

  CHECK(dflt.solenoid.infinite);
  CHECK(dflt.solenoid.radius == 1e-3);
  CHECK(std::isnan(dflt.squid.lock_setpoint)); // setpoint captured at run time
  CHECK(dflt.output.path == "-");
  CHECK(dflt.output.pulse_samples == 1024);
}

TEST_CASE("values overlay onto defaults") {
  const auto cfg = parse_config("[solenoid]\n"
                                "radius = 2e-3\n"
                                "current = 0.25\n"
                                "infinite = false\n"
                                "[charge]\n"
                                "position = 4e-3 0 1e-3\n"
                                "q = 1.602176634e-19\n"
                                "[squid]\n"
                                "n_quanta = 7\n"
                                "lock_setpoint = 2e-15\n"
                                "[quadrature]\n"
                                "tol = 1e-5\n"
                                "[output]\n"
                                "path = run.csv\n"
                                "grid_points = 11\n");
  CHECK(cfg.solenoid.radius == 2e-3);
  CHECK(cfg.solenoid.current == 0.25);
  CHECK_FALSE(cfg.solenoid.infinite);
  CHECK(cfg.solenoid.length == 0.2); // untouched default
  CHECK(cfg.charge.position == Vec3{4e-3, 0, 1e-3});
  CHECK(cfg.charge.charge == 1.602176634e-19);
  CHECK(cfg.protocol.n_quanta == 7);
  CHECK(cfg.squid.lock_setpoint == 2e-15);
  CHECK(cfg.quad_tol == 1e-5);
  CHECK(cfg.output.path == "run.csv");
  CHECK(cfg.output.grid_points == 11);
}

TEST_CASE("comments, whitespace, and repeated sections are tolerated") {
  const auto cfg = parse_config("# full-line comment\n"
                                "\n"
                                "  [solenoid]  \n"
                                "   radius =    3e-3   # trailing comment\n"
                                "[output]\n"
                                "grid_points = 21\n"
                                "[solenoid]\n"
                                "current = 0.5\n"
                                "radius = 2e-3\n"); // last assignment wins
  CHECK(cfg.solenoid.radius == 2e-3);
  CHECK(cfg.solenoid.current == 0.5);
  CHECK(cfg.output.grid_points == 21);
}

TEST_CASE("unknown names are rejected by name") {
  CHECK(contains(parse_error("[plasma]\n"), "unknown section 'plasma'"));
  CHECK(contains(parse_error("[solenoid]\nhue = 3\n"), "unknown key 'solenoid.hue'"));
  CHECK(contains(parse_error("[solenoid]\nhue = 3\n"), "line 2"));
}

TEST_CASE("syntax errors carry a location") {
  CHECK(contains(parse_error("radius = 1e-3\n"), "key before any [section]"));
  CHECK(contains(parse_error("radius = 1e-3\n"), "line 1"));
  CHECK(contains(parse_error("[solenoid]\nradius 2e-3\n"), "expected 'key = value'"));
  CHECK(contains(parse_error("[solenoid]\nradius 2e-3\n"), "line 2"));
  CHECK(contains(parse_error("[solenoid\n"), "unterminated section header"));
  CHECK(contains(parse_error("[solenoid]\n = 1\n"), "empty key"));
}

TEST_CASE("typed values are validated with the offending text") {
  const std::string real_err = parse_error("[solenoid]\nradius = big\n");
  CHECK(contains(real_err, "solenoid.radius: expected a real number"));
  CHECK(contains(real_err, "'big'"));
  CHECK(contains(real_err, "line 2"));
  CHECK(contains(parse_error("[output]\ngrid_points = 4.5\n"),
                 "output.grid_points: expected an integer"));
  CHECK(contains(parse_error("[solenoid]\ninfinite = maybe\n"),
                 "solenoid.infinite: expected a boolean"));
  CHECK(contains(parse_error("[charge]\nvelocity = 1 2\n"),
                 "charge.velocity: expected three reals"));
  CHECK(contains(parse_error("[charge]\nvelocity = 1 2 3 4\n"),
                 "charge.velocity: expected exactly three reals"));
}

TEST_CASE("range rules name the key") {
  CHECK(contains(parse_error("[solenoid]\nradius = -1\n"), "solenoid.radius: must be positive"));
  CHECK(contains(parse_error("[solenoid]\nlength = 0\n"), "solenoid.length: must be positive"));
  CHECK(contains(parse_error("[shield]\ntemperature = -4\n"), "shield.temperature: must be positive"));
  CHECK(contains(parse_error("[quadrature]\ntol = 0\n"), "quadrature.tol: must be positive"));
  CHECK(contains(parse_error("[quadrature]\nmax_depth = 3\n"), "quadrature.max_depth: must be >= 4"));
  CHECK(contains(parse_error("[output]\ngrid_points = 1\n"), "output.grid_points: must be >= 2"));
  CHECK(contains(parse_error("[output]\nfringe_gradient = 0\n"),
                 "output.fringe_gradient: must be nonzero"));
  CHECK(contains(parse_error("[output]\ntrajectory_points = 2\n"),
                 "output.trajectory_points: must be >= 3"));
}

TEST_CASE("pulse sample count must be a power of two >= 64") {
  CHECK(contains(parse_error("[output]\npulse_samples = 100\n"),
                 "output.pulse_samples: must be a power of two >= 64"));
  CHECK(contains(parse_error("[output]\npulse_samples = 32\n"), "power of two >= 64"));
  CHECK(parse_config("[output]\npulse_samples = 64\n").output.pulse_samples == 64);
  CHECK(parse_config("[output]\npulse_samples = 4096\n").output.pulse_samples == 4096);
}

TEST_CASE("fast charges need the explicit override") {
  const std::string fast = "[charge]\nvelocity = 0 3.5e6 0\n";
  CHECK(contains(parse_error(fast), "charge.velocity"));
  CHECK(contains(parse_error(fast), "relativistic_override"));
  const auto cfg = parse_config(fast + "relativistic_override = true\n");
  CHECK(cfg.charge.velocity == Vec3{0, 3.5e6, 0});
}

TEST_CASE("constructor-level rejections surface as config errors") {
  CHECK(contains(parse_error("[solenoid]\naxis = 0 0 2\n"), "solenoid:"));
  CHECK(contains(parse_error("[squid]\nramp_steps = 0\n"), "squid:"));
  CHECK(contains(parse_error("[shield]\nthickness = -1\n"), "shield:"));
}

TEST_CASE("hash is order insensitive and value sensitive") {
  const auto a = parse_config("[solenoid]\nradius = 2e-3\ncurrent = 0.25\n");
  const auto b = parse_config("[solenoid]\ncurrent = 0.25\n[output]\n[solenoid]\nradius = 2e-3\n");
  CHECK(a.canonical_text() == b.canonical_text());
  CHECK(a.config_hash() == b.config_hash());

  const auto c = parse_config("[solenoid]\nradius = 2e-3\ncurrent = 0.26\n");
  CHECK(c.config_hash() != a.config_hash());
  CHECK(a.config_hash() != default_config().config_hash());
}

TEST_CASE("config files load through the same parser") {
  const std::string path = "scenario_roundtrip.cfg";
  {
    std::ofstream out(path, std::ios::binary);
    out << "[solenoid]\nradius = 2e-3\n# comment\n[output]\ngrid_points = 5\n";
  }
  const auto cfg = load_config_file(path);
  CHECK(cfg.solenoid.radius == 2e-3);
  CHECK(cfg.output.grid_points == 5);
  std::remove(path.c_str());

  CHECK(contains(
      oracles::thrown_message<ConfigError>([] { (void)load_config_file("no/such/file.cfg"); }),
      "cannot open config file"));
}
