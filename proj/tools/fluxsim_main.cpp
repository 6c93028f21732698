#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fluxsim/acceptance.hpp"
#include "fluxsim/csvio.hpp"
#include "fluxsim/errors.hpp"
#include "fluxsim/interaction.hpp"
#include "fluxsim/interference.hpp"
#include "fluxsim/quantum_lc.hpp"
#include "fluxsim/scenario.hpp"
#include "fluxsim/shield.hpp"
#include "fluxsim/squid.hpp"

namespace {

using namespace fluxsim;

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_convergence = 3;
constexpr int exit_acceptance = 4;

void print_usage(std::ostream& out) {
  out << "usage: fluxsim [--config FILE] [--serial] SUBCOMMAND [options]\n"
         "\n"
         "subcommands:\n"
         "  fields                        field scan CSV: x,y,z,Bx,By,Bz[,Ax,Ay,Az]\n"
         "  energy                        interaction-energy report CSV\n"
         "  emf                           induced-EMF trace CSV: t,flux,emf\n"
         "  interfere                     two-beam fringe CSV: x,intensity\n"
         "  shield                        pulse spectrum CSV: freq_hz,amplitude\n"
         "  squid-run --hypothesis vp|ie  flux-locked-loop trace CSV\n"
         "  lc-check [--dim N]            canonical commutator report\n"
         "  verify-all                    run the acceptance suite\n"
         "\n"
         "exit codes: 0 ok, 2 config error, 3 convergence failure, 4 acceptance failure\n";
}

// Output sink honoring output.path ("-" = stdout).
class Sink {
public:
  explicit Sink(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("output.path: cannot open '" + path + "' for writing");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

private:
  std::ofstream file_;
  std::ostream* out_ = &std::cout;
};

std::string hash_comment(const ScenarioConfig& cfg) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "# config_hash=%016llx\n",
                static_cast<unsigned long long>(cfg.config_hash()));
  return buf;
}

int cmd_fields(const ScenarioConfig& cfg, ExecPolicy policy) {
  Sink sink(cfg.output.path);
  std::ostream& out = sink.stream();
  out << hash_comment(cfg);
  const bool with_a = cfg.solenoid.infinite;
  out << (with_a ? "x,y,z,Bx,By,Bz,Ax,Ay,Az\n" : "x,y,z,Bx,By,Bz\n");

  Vec3 e1, e2;
  orthonormal_frame(cfg.solenoid.axis, e1, e2);
  const int n = cfg.output.grid_points;
  for (int i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / (n - 1);
    const Vec3 p = cfg.solenoid.center + (2.0 * f - 1.0) * cfg.output.grid_halfwidth * e1;
    const Vec3 b = b_solenoid(cfg.solenoid, p, cfg.quad_tol, policy);
    std::vector<double> cells{p.x, p.y, p.z, b.x, b.y, b.z};
    if (with_a) {
      const Vec3 a = a_solenoid_closed(cfg.solenoid, p);
      cells.insert(cells.end(), {a.x, a.y, a.z});
    }
    out << csv::row(cells);
  }
  return exit_ok;
}

int cmd_energy(const ScenarioConfig& cfg, ExecPolicy policy) {
  const EnergyReport rep = verify_eq2(cfg.charge, cfg.solenoid, cfg.quad_tol, policy);
  Sink sink(cfg.output.path);
  std::ostream& out = sink.stream();
  out << hash_comment(cfg);
  out << "w_integral,w_closed,rel_discrepancy,quadrature_cells,tol_used\n";
  out << csv::join({csv::g17(rep.w_integral), csv::g17(rep.w_closed), csv::g17(rep.rel_discrepancy),
                    std::to_string(rep.quadrature_cells), csv::g17(rep.tol_used)});
  return exit_ok;
}

int cmd_emf(const ScenarioConfig& cfg, ExecPolicy policy) {
  const double speed = cfg.charge.velocity.norm();
  if (speed <= 0.0) throw ConfigError("charge.velocity: emf needs a moving charge");
  const double span = 20.0 * std::max(cfg.solenoid.rho_of(cfg.charge.position), cfg.solenoid.radius);
  const double t_total = span / speed;
  const int n = cfg.output.trajectory_points;
  std::vector<std::pair<double, ChargeState>> trajectory;
  trajectory.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = (static_cast<double>(i) / (n - 1) - 0.5) * t_total;
    const Vec3 p = cfg.charge.position + t * cfg.charge.velocity;
    trajectory.emplace_back(t, ChargeState::make(cfg.charge.charge, p, cfg.charge.velocity, true));
  }
  const int turns_total =
      std::max(1, static_cast<int>(std::lround(cfg.solenoid.turns_per_meter * cfg.solenoid.length)));
  const EmfTrace trace = induced_emf(trajectory, cfg.solenoid, turns_total, cfg.quad_tol, policy);

  Sink sink(cfg.output.path);
  std::ostream& out = sink.stream();
  out << hash_comment(cfg);
  out << "t,flux,emf\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    out << csv::row({trace.times[i], trace.flux_through_solenoid[i], trace.emf[i]});
  return exit_ok;
}

int cmd_interfere(const ScenarioConfig& cfg, ExecPolicy) {
  const double delta_phi = ab_phase(cfg.solenoid.bore_flux());
  const int n = cfg.output.screen_points;
  std::vector<double> screen(n);
  for (int i = 0; i < n; ++i)
    screen[i] = (2.0 * i / (n - 1) - 1.0) * cfg.output.screen_halfwidth;
  const FringePattern pattern = fringe_pattern(delta_phi, cfg.output.fringe_gradient, screen);

  Sink sink(cfg.output.path);
  std::ostream& out = sink.stream();
  out << hash_comment(cfg);
  out << "# delta_phi_rad=" << csv::g17(delta_phi) << "\n";
  out << "x,intensity\n";
  for (std::size_t i = 0; i < pattern.positions.size(); ++i)
    out << csv::row({pattern.positions[i], pattern.intensities[i]});
  return exit_ok;
}

int cmd_shield(const ScenarioConfig& cfg, ExecPolicy policy) {
  const double speed = cfg.charge.velocity.norm();
  const PulseSpectrum spec =
      pulse_spectrum(speed, cfg.shield.b_shield, cfg.output.pulse_samples, policy);
  const bool shields = shields_ac(cfg.shield, cfg.shield_temperature, spec.photon_energy_ev);

  Sink sink(cfg.output.path);
  std::ostream& out = sink.stream();
  out << hash_comment(cfg);
  out << "# centroid_hz=" << csv::g17(spec.centroid_frequency)
      << ", photon_ev=" << csv::g17(spec.photon_energy_ev) << ", shields="
      << (shields ? "true" : "false") << "\n";
  out << "freq_hz,amplitude\n";
  for (std::size_t i = 0; i < spec.frequencies.size(); ++i)
    out << csv::row({spec.frequencies[i], spec.amplitudes[i]});
  return exit_ok;
}

int cmd_squid_run(const ScenarioConfig& cfg, ExecPolicy, const std::string& hypothesis) {
  Hypothesis h;
  if (hypothesis == "vp")
    h = Hypothesis::VectorPotential;
  else if (hypothesis == "ie")
    h = Hypothesis::InteractionEnergy;
  else
    throw ConfigError("squid-run: --hypothesis must be vp or ie");

  const ExperimentTrace trace = run_experiment(cfg.squid, cfg.shield, cfg.protocol, h);

  Sink sink(cfg.output.path);
  std::ostream& out = sink.stream();
  out << hash_comment(cfg);
  out << "step,T_K,f,I_a_A,phi_a_wb,phi_b_wb,phi_obs_wb,I_c_A\n";
  for (const TraceRow& row : trace.rows)
    out << csv::join({std::to_string(row.step), csv::g17(row.temperature),
                      csv::g17(row.shielded_fraction), csv::g17(row.i_a), csv::g17(row.phi_a),
                      csv::g17(row.phi_b), csv::g17(row.phi_obs), csv::g17(row.i_c)});
  out << "# final_total_flux_quanta=" << csv::g17(trace.final_total_flux_quanta) << "\n";
  return exit_ok;
}

int cmd_lc_check(const ScenarioConfig& cfg, ExecPolicy policy, int dim) {
  const LcOperators ops = build_lc_operators(2.5e-10, 1e-13, dim);
  const CommutatorReport rep = verify_commutators(ops.q, ops.phi, ops.u, policy);
  Sink sink(cfg.output.path);
  std::ostream& out = sink.stream();
  out << "retained_block_max_deviation=" << csv::g17(rep.retained_max_deviation) << "\n";
  out << "corner_value=" << csv::g17(rep.corner_value) << " expected=" << csv::g17(rep.corner_expected)
      << "\n";
  return exit_ok;
}

int cmd_verify_all(ExecPolicy policy) {
  const auto results = acceptance::run_all(policy, &std::cout);
  return acceptance::all_passed(results) ? exit_ok : exit_acceptance;
}

int run(const std::vector<std::string>& args) {
  std::string config_path;
  bool serial = false;
  std::string subcommand;
  std::string hypothesis;
  int dim = 16;
  bool dim_given = false;

  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a file path");
      config_path = args[++i];
    } else if (a == "--serial") {
      serial = true;
    } else if (a == "--hypothesis") {
      if (i + 1 >= args.size()) throw ConfigError("--hypothesis needs vp or ie");
      hypothesis = args[++i];
    } else if (a == "--dim") {
      if (i + 1 >= args.size()) throw ConfigError("--dim needs an integer");
      try {
        dim = std::stoi(args[++i]);
      } catch (const std::exception&) {
        throw ConfigError("--dim: expected an integer, got '" + args[i] + "'");
      }
      dim_given = true;
    } else if (a == "--help" || a == "-h") {
      print_usage(std::cout);
      return exit_ok;
    } else if (!a.empty() && a[0] == '-') {
      print_usage(std::cerr);
      throw ConfigError("unknown option '" + a + "'");
    } else if (subcommand.empty()) {
      subcommand = a;
    } else {
      print_usage(std::cerr);
      throw ConfigError("unexpected argument '" + a + "'");
    }
  }

  if (subcommand.empty()) {
    print_usage(std::cerr);
    throw ConfigError("missing subcommand");
  }

  const ScenarioConfig cfg = config_path.empty() ? default_config() : load_config_file(config_path);
  const ExecPolicy policy = serial ? ExecPolicy::Serial : default_policy();

  if (subcommand == "fields") return cmd_fields(cfg, policy);
  if (subcommand == "energy") return cmd_energy(cfg, policy);
  if (subcommand == "emf") return cmd_emf(cfg, policy);
  if (subcommand == "interfere") return cmd_interfere(cfg, policy);
  if (subcommand == "shield") return cmd_shield(cfg, policy);
  if (subcommand == "squid-run") return cmd_squid_run(cfg, policy, hypothesis);
  if (subcommand == "lc-check") return cmd_lc_check(cfg, policy, dim_given ? dim : 16);
  if (subcommand == "verify-all") return cmd_verify_all(policy);

  print_usage(std::cerr);
  throw ConfigError("unknown subcommand '" + subcommand + "'");
}

} // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return exit_convergence;
  } catch (const InstabilityError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return exit_convergence;
  } catch (const SingularityError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return exit_convergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_convergence;
  }
}
