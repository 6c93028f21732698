#include "fluxsim/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "fluxsim/csvio.hpp"
#include "fluxsim/errors.hpp"

namespace fluxsim {

namespace {

struct RawValue {
  std::string text;
  int line = 0;
  int column = 0;
};

[[noreturn]] void fail_at(const RawValue& v, const std::string& what) {
  throw ConfigError("line " + std::to_string(v.line) + ", column " + std::to_string(v.column) +
                    ": " + what);
}

double parse_real(const std::string& section, const std::string& key, const RawValue& v) {
  char* end = nullptr;
  const double x = std::strtod(v.text.c_str(), &end);
  if (end == v.text.c_str() || *end != '\0')
    fail_at(v, section + "." + key + ": expected a real number, got '" + v.text + "'");
  return x;
}

long parse_int(const std::string& section, const std::string& key, const RawValue& v) {
  char* end = nullptr;
  const long x = std::strtol(v.text.c_str(), &end, 10);
  if (end == v.text.c_str() || *end != '\0')
    fail_at(v, section + "." + key + ": expected an integer, got '" + v.text + "'");
  return x;
}

bool parse_bool(const std::string& section, const std::string& key, const RawValue& v) {
  if (v.text == "true" || v.text == "1" || v.text == "yes") return true;
  if (v.text == "false" || v.text == "0" || v.text == "no") return false;
  fail_at(v, section + "." + key + ": expected a boolean, got '" + v.text + "'");
}

Vec3 parse_vec3(const std::string& section, const std::string& key, const RawValue& v) {
  std::istringstream in(v.text);
  double x, y, z;
  if (!(in >> x >> y >> z))
    fail_at(v, section + "." + key + ": expected three reals, got '" + v.text + "'");
  std::string rest;
  if (in >> rest)
    fail_at(v, section + "." + key + ": expected exactly three reals, got '" + v.text + "'");
  return Vec3{x, y, z};
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Every key the format knows, with its section. Anything else is rejected
// by name.
const std::map<std::string, std::vector<std::string>> known_keys = {
    {"solenoid", {"center", "axis", "radius", "length", "turns_per_meter", "current", "infinite"}},
    {"charge", {"q", "position", "velocity", "relativistic_override"}},
    {"shield",
     {"critical_temperature", "energy_gap_ev", "penetration_depth", "thickness", "b_shield",
      "gap_threshold_multiplier", "temperature"}},
    {"squid",
     {"i0", "mutual_inductance_a", "lock_setpoint", "n_quanta", "t_start", "t_end", "ramp_steps",
      "k_p", "k_i", "front_steps", "allow_no_crossing"}},
    {"quadrature", {"tol", "max_depth"}},
    {"output",
     {"path", "grid_points", "grid_halfwidth", "screen_points", "screen_halfwidth",
      "fringe_gradient", "pulse_samples", "trajectory_points"}},
};

} // namespace

ScenarioConfig default_config() {
  ScenarioConfig cfg;
  cfg.solenoid = SolenoidSpec::make(Vec3{0, 0, 0}, Vec3{0, 0, 1}, 1e-3, 0.2, 1e5, 0.1, true);
  cfg.charge = ChargeState::make(-constants::elem_charge, Vec3{3e-3, 0, 0}, Vec3{0, 1e5, 0});
  cfg.shield = ShieldSpec::make(9.2, 3e-3, 3.9e-8, 1e-6, 6.366e-7);
  cfg.shield_temperature = 4.2;
  cfg.squid = SquidSpec::make(1e-5, 1e-9);
  cfg.protocol = Protocol::make(10, 11.0, 4.2, 1200, 0.5, 0.1, 400);
  cfg.quad_tol = 1e-3;
  cfg.quad_max_depth = 30;
  cfg.output = OutputConfig{};
  return cfg;
}

ScenarioConfig parse_config(const std::string& text) {
  // Pass 1: collect section.key -> raw string, with location info.
  std::map<std::string, std::map<std::string, RawValue>> raw;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ", column " +
                          std::to_string(line.find('[') + 1) + ": unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (known_keys.find(section) == known_keys.end())
        throw ConfigError("line " + std::to_string(lineno) + ": unknown section '" + section + "'");
      continue;
    }
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ", column 1: expected 'key = value'");
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) + ", column 1: key before any [section]");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ", column 1: empty key");
    const auto& allowed = known_keys.at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + section + "." + key +
                        "'");
    const int col = static_cast<int>(line.find(value.empty() ? "=" : value) + 1);
    raw[section][key] = RawValue{value, lineno, col};
  }

  // Pass 2: overlay onto defaults, strongly typed.
  ScenarioConfig cfg = default_config();
  auto get = [&raw](const std::string& sec, const std::string& key) -> const RawValue* {
    auto s = raw.find(sec);
    if (s == raw.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  };
  auto real_or = [&](const std::string& sec, const std::string& key, double dflt) {
    const RawValue* v = get(sec, key);
    return v ? parse_real(sec, key, *v) : dflt;
  };
  auto int_or = [&](const std::string& sec, const std::string& key, long dflt) {
    const RawValue* v = get(sec, key);
    return v ? parse_int(sec, key, *v) : dflt;
  };
  auto bool_or = [&](const std::string& sec, const std::string& key, bool dflt) {
    const RawValue* v = get(sec, key);
    return v ? parse_bool(sec, key, *v) : dflt;
  };
  auto vec_or = [&](const std::string& sec, const std::string& key, const Vec3& dflt) {
    const RawValue* v = get(sec, key);
    return v ? parse_vec3(sec, key, *v) : dflt;
  };

  // solenoid
  {
    const double radius = real_or("solenoid", "radius", cfg.solenoid.radius);
    if (!(radius > 0.0)) throw ConfigError("solenoid.radius: must be positive");
    const double length = real_or("solenoid", "length", cfg.solenoid.length);
    if (!(length > 0.0)) throw ConfigError("solenoid.length: must be positive");
    const double nt = real_or("solenoid", "turns_per_meter", cfg.solenoid.turns_per_meter);
    if (!(nt > 0.0)) throw ConfigError("solenoid.turns_per_meter: must be positive");
    try {
      cfg.solenoid = SolenoidSpec::make(vec_or("solenoid", "center", cfg.solenoid.center),
                                        vec_or("solenoid", "axis", cfg.solenoid.axis), radius,
                                        length, nt, real_or("solenoid", "current", cfg.solenoid.current),
                                        bool_or("solenoid", "infinite", cfg.solenoid.infinite));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("solenoid: ") + e.what());
    }
  }
  // charge
  {
    const bool override_rel =
        bool_or("charge", "relativistic_override", false);
    const Vec3 vel = vec_or("charge", "velocity", cfg.charge.velocity);
    if (vel.norm() >= constants::v_max_nonrelativistic && !override_rel)
      throw ConfigError(
          "charge.velocity: |v| >= 0.01c violates the non-relativistic validity rule; set "
          "charge.relativistic_override = true to construct anyway");
    try {
      cfg.charge = ChargeState::make(real_or("charge", "q", cfg.charge.charge),
                                     vec_or("charge", "position", cfg.charge.position), vel,
                                     override_rel);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("charge: ") + e.what());
    }
  }
  // shield
  {
    try {
      cfg.shield = ShieldSpec::make(
          real_or("shield", "critical_temperature", cfg.shield.critical_temperature),
          real_or("shield", "energy_gap_ev", cfg.shield.energy_gap_ev),
          real_or("shield", "penetration_depth", cfg.shield.penetration_depth),
          real_or("shield", "thickness", cfg.shield.thickness),
          real_or("shield", "b_shield", cfg.shield.b_shield),
          real_or("shield", "gap_threshold_multiplier", cfg.shield.gap_threshold_multiplier));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("shield: ") + e.what());
    }
    cfg.shield_temperature = real_or("shield", "temperature", cfg.shield_temperature);
    if (!(cfg.shield_temperature > 0.0))
      throw ConfigError("shield.temperature: must be positive");
  }
  // squid + protocol
  {
    try {
      cfg.squid = SquidSpec::make(real_or("squid", "i0", cfg.squid.i0),
                                  real_or("squid", "mutual_inductance_a", cfg.squid.mutual_inductance_a),
                                  real_or("squid", "lock_setpoint", cfg.squid.lock_setpoint));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("squid: ") + e.what());
    }
    const bool relaxed = bool_or("squid", "allow_no_crossing", false);
    try {
      const int n = static_cast<int>(int_or("squid", "n_quanta", cfg.protocol.n_quanta));
      const double ts = real_or("squid", "t_start", cfg.protocol.t_start);
      const double te = real_or("squid", "t_end", cfg.protocol.t_end);
      const int ramp = static_cast<int>(int_or("squid", "ramp_steps", cfg.protocol.ramp_steps));
      const double kp = real_or("squid", "k_p", cfg.protocol.k_p);
      const double ki = real_or("squid", "k_i", cfg.protocol.k_i);
      const int front = static_cast<int>(int_or("squid", "front_steps", cfg.protocol.front_steps));
      cfg.protocol = relaxed ? Protocol::make_relaxed(n, ts, te, ramp, kp, ki, front)
                             : Protocol::make(n, ts, te, ramp, kp, ki, front);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("squid: ") + e.what());
    }
  }
  // quadrature
  cfg.quad_tol = real_or("quadrature", "tol", cfg.quad_tol);
  if (!(cfg.quad_tol > 0.0)) throw ConfigError("quadrature.tol: must be positive");
  cfg.quad_max_depth = static_cast<int>(int_or("quadrature", "max_depth", cfg.quad_max_depth));
  if (cfg.quad_max_depth < 4) throw ConfigError("quadrature.max_depth: must be >= 4");
  // output
  {
    const RawValue* p = get("output", "path");
    if (p) cfg.output.path = p->text;
    cfg.output.grid_points = static_cast<int>(int_or("output", "grid_points", cfg.output.grid_points));
    if (cfg.output.grid_points < 2) throw ConfigError("output.grid_points: must be >= 2");
    cfg.output.grid_halfwidth = real_or("output", "grid_halfwidth", cfg.output.grid_halfwidth);
    if (!(cfg.output.grid_halfwidth > 0.0)) throw ConfigError("output.grid_halfwidth: must be positive");
    cfg.output.screen_points =
        static_cast<int>(int_or("output", "screen_points", cfg.output.screen_points));
    if (cfg.output.screen_points < 2) throw ConfigError("output.screen_points: must be >= 2");
    cfg.output.screen_halfwidth = real_or("output", "screen_halfwidth", cfg.output.screen_halfwidth);
    if (!(cfg.output.screen_halfwidth > 0.0))
      throw ConfigError("output.screen_halfwidth: must be positive");
    cfg.output.fringe_gradient = real_or("output", "fringe_gradient", cfg.output.fringe_gradient);
    if (cfg.output.fringe_gradient == 0.0) throw ConfigError("output.fringe_gradient: must be nonzero");
    cfg.output.pulse_samples =
        static_cast<int>(int_or("output", "pulse_samples", cfg.output.pulse_samples));
    if (cfg.output.pulse_samples < 64 ||
        (cfg.output.pulse_samples & (cfg.output.pulse_samples - 1)) != 0)
      throw ConfigError("output.pulse_samples: must be a power of two >= 64");
    cfg.output.trajectory_points =
        static_cast<int>(int_or("output", "trajectory_points", cfg.output.trajectory_points));
    if (cfg.output.trajectory_points < 3) throw ConfigError("output.trajectory_points: must be >= 3");
  }
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string ScenarioConfig::canonical_text() const {
  auto vec = [](const Vec3& v) {
    return csv::g17(v.x) + " " + csv::g17(v.y) + " " + csv::g17(v.z);
  };
  std::vector<std::string> lines = {
      "charge.position=" + vec(charge.position),
      "charge.q=" + csv::g17(charge.charge),
      "charge.velocity=" + vec(charge.velocity),
      "output.fringe_gradient=" + csv::g17(output.fringe_gradient),
      "output.grid_halfwidth=" + csv::g17(output.grid_halfwidth),
      "output.grid_points=" + std::to_string(output.grid_points),
      "output.path=" + output.path,
      "output.pulse_samples=" + std::to_string(output.pulse_samples),
      "output.screen_halfwidth=" + csv::g17(output.screen_halfwidth),
      "output.screen_points=" + std::to_string(output.screen_points),
      "output.trajectory_points=" + std::to_string(output.trajectory_points),
      "quadrature.max_depth=" + std::to_string(quad_max_depth),
      "quadrature.tol=" + csv::g17(quad_tol),
      "shield.b_shield=" + csv::g17(shield.b_shield),
      "shield.critical_temperature=" + csv::g17(shield.critical_temperature),
      "shield.energy_gap_ev=" + csv::g17(shield.energy_gap_ev),
      "shield.gap_threshold_multiplier=" + csv::g17(shield.gap_threshold_multiplier),
      "shield.penetration_depth=" + csv::g17(shield.penetration_depth),
      "shield.temperature=" + csv::g17(shield_temperature),
      "shield.thickness=" + csv::g17(shield.thickness),
      "solenoid.axis=" + vec(solenoid.axis),
      "solenoid.center=" + vec(solenoid.center),
      "solenoid.current=" + csv::g17(solenoid.current),
      "solenoid.infinite=" + std::string(solenoid.infinite ? "true" : "false"),
      "solenoid.length=" + csv::g17(solenoid.length),
      "solenoid.radius=" + csv::g17(solenoid.radius),
      "solenoid.turns_per_meter=" + csv::g17(solenoid.turns_per_meter),
      "squid.front_steps=" + std::to_string(protocol.front_steps),
      "squid.allow_no_crossing=" + std::string(protocol.allow_no_crossing ? "true" : "false"),
      "squid.i0=" + csv::g17(squid.i0),
      "squid.k_i=" + csv::g17(protocol.k_i),
      "squid.k_p=" + csv::g17(protocol.k_p),
      "squid.lock_setpoint=" + csv::g17(squid.lock_setpoint),
      "squid.mutual_inductance_a=" + csv::g17(squid.mutual_inductance_a),
      "squid.n_quanta=" + std::to_string(protocol.n_quanta),
      "squid.ramp_steps=" + std::to_string(protocol.ramp_steps),
      "squid.t_end=" + csv::g17(protocol.t_end),
      "squid.t_start=" + csv::g17(protocol.t_start),
  };
  std::sort(lines.begin(), lines.end());
  std::string text;
  for (const auto& l : lines) {
    text += l;
    text += '\n';
  }
  return text;
}

std::uint64_t ScenarioConfig::config_hash() const {
  // FNV-1a, 64-bit
  const std::string text = canonical_text();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace fluxsim
