#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fluxsim/shield.hpp"

// SQUID critical-current response and the two-solenoid flux-locked-loop
// experiment that separates the vector-potential and interaction-energy
// hypotheses.

namespace fluxsim {

struct SquidSpec {
  double i0 = 1e-5;                 // A, maximum critical current
  double flux_quantum = 0.0;        // Wb, always h/2e from the constants table
  double mutual_inductance_a = 1e-9; // H, feedback solenoid a current -> loop flux
  double lock_setpoint = std::numeric_limits<double>::quiet_NaN(); // Wb; NaN: capture at lock-on

  static SquidSpec make(double i0, double mutual_inductance_a,
                        double lock_setpoint = std::numeric_limits<double>::quiet_NaN());
};

enum class Hypothesis { VectorPotential, InteractionEnergy };

struct Protocol {
  int n_quanta = 10;      // Phi_b = n_quanta * Phi0 before cooling
  double t_start = 11.0;  // K
  double t_end = 4.2;     // K
  int ramp_steps = 1200;
  double k_p = 0.5; // controller gains, flux units per flux error
  double k_i = 0.1;
  int front_steps = 400;         // cooling-front duration once T crosses T_c
  bool allow_no_crossing = false; // relaxed variant for degenerate-protocol tests

  static Protocol make(int n_quanta, double t_start, double t_end, int ramp_steps, double k_p = 0.5,
                       double k_i = 0.1, int front_steps = 400);
  // Skips the T_start > T_c > T_end requirement at run time.
  static Protocol make_relaxed(int n_quanta, double t_start, double t_end, int ramp_steps,
                               double k_p = 0.5, double k_i = 0.1, int front_steps = 400);
};

struct TraceRow {
  int step = 0;
  double temperature = 0.0;       // K
  double shielded_fraction = 0.0; // f in [0,1]
  double i_a = 0.0;               // A, feedback current carried into the next step
  double phi_a = 0.0;             // Wb, M_a * i_a
  double phi_b = 0.0;             // Wb, constant throughout
  double phi_obs = 0.0;           // Wb, measured this step
  double i_c = 0.0;               // A, critical current at phi_obs
};

struct ExperimentTrace {
  std::vector<TraceRow> rows;
  double lock_setpoint = 0.0;          // Wb
  double final_total_flux_quanta = 0.0; // (phi_a_final + phi_b) / Phi0
};

// Controller error grew over 100 consecutive steps; carries the trace up to
// the step that tripped.
class InstabilityError : public std::runtime_error {
public:
  InstabilityError(const std::string& what, ExperimentTrace prefix)
      : std::runtime_error(what), prefix_(std::move(prefix)) {}
  const ExperimentTrace& trace_prefix() const { return prefix_; }

private:
  ExperimentTrace prefix_;
};

// I_C = I0 |cos(pi Phi / Phi0)|.
double critical_current(const SquidSpec& spec, double flux_wb);

// What the SQUID sees: VectorPotential keeps the full Phi_a + Phi_b;
// InteractionEnergy decouples solenoid b as the shielded fraction grows.
double observable_flux(Hypothesis h, double phi_a, double phi_b, double f);

// The cooling protocol under a hypothesis: linear temperature ramp, linear
// cooling front once T < T_c, discrete PI loop holding phi_obs at the
// setpoint captured when feedback turns on.
ExperimentTrace run_experiment(const SquidSpec& spec, const ShieldSpec& shield, const Protocol& proto,
                               Hypothesis h);

} // namespace fluxsim
