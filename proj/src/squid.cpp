#include "fluxsim/squid.hpp"

#include <cmath>
#include <limits>

#include "fluxsim/constants.hpp"

namespace fluxsim {

SquidSpec SquidSpec::make(double i0, double mutual_inductance_a, double lock_setpoint) {
  if (!(i0 > 0.0)) throw std::invalid_argument("SquidSpec: I0 must be positive");
  if (!(mutual_inductance_a > 0.0))
    throw std::invalid_argument("SquidSpec: mutual inductance must be positive");
  SquidSpec s;
  s.i0 = i0;
  s.flux_quantum = constants::phi0_sc;
  s.mutual_inductance_a = mutual_inductance_a;
  s.lock_setpoint = lock_setpoint;
  return s;
}

namespace {

Protocol make_protocol(int n_quanta, double t_start, double t_end, int ramp_steps, double k_p,
                       double k_i, int front_steps, bool allow_no_crossing) {
  if (n_quanta < 1) throw std::invalid_argument("Protocol: n_quanta must be >= 1");
  if (!(t_start > t_end)) throw std::invalid_argument("Protocol: cooling requires T_start > T_end");
  if (ramp_steps < 1) throw std::invalid_argument("Protocol: ramp_steps must be >= 1");
  if (k_p < 0.0 || k_i < 0.0) throw std::invalid_argument("Protocol: gains must be >= 0");
  if (front_steps < 1) throw std::invalid_argument("Protocol: front_steps must be >= 1");
  Protocol p;
  p.n_quanta = n_quanta;
  p.t_start = t_start;
  p.t_end = t_end;
  p.ramp_steps = ramp_steps;
  p.k_p = k_p;
  p.k_i = k_i;
  p.front_steps = front_steps;
  p.allow_no_crossing = allow_no_crossing;
  return p;
}

} // namespace

Protocol Protocol::make(int n_quanta, double t_start, double t_end, int ramp_steps, double k_p,
                        double k_i, int front_steps) {
  return make_protocol(n_quanta, t_start, t_end, ramp_steps, k_p, k_i, front_steps, false);
}

Protocol Protocol::make_relaxed(int n_quanta, double t_start, double t_end, int ramp_steps,
                                double k_p, double k_i, int front_steps) {
  return make_protocol(n_quanta, t_start, t_end, ramp_steps, k_p, k_i, front_steps, true);
}

double critical_current(const SquidSpec& spec, double flux_wb) {
  return spec.i0 * std::abs(std::cos(constants::pi * flux_wb / spec.flux_quantum));
}

double observable_flux(Hypothesis h, double phi_a, double phi_b, double f) {
  if (!(f >= 0.0 && f <= 1.0))
    throw std::invalid_argument("observable_flux: shielded fraction must lie in [0,1]");
  // Vector-potential reading keeps the full flux no matter the shield; the
  // interaction-energy reading loses solenoid b as the shield closes.
  return h == Hypothesis::VectorPotential ? phi_a + phi_b : phi_a + (1.0 - f) * phi_b;
}

ExperimentTrace run_experiment(const SquidSpec& spec, const ShieldSpec& shield,
                               const Protocol& proto, Hypothesis h) {
  const double t_c = shield.critical_temperature;
  if (!proto.allow_no_crossing && !(proto.t_start > t_c && t_c > proto.t_end))
    throw std::invalid_argument("run_experiment: protocol requires T_start > T_c > T_end");

  const double phi0 = spec.flux_quantum;
  const double phi_b = proto.n_quanta * phi0; // set once, never changed
  double setpoint = spec.lock_setpoint;
  if (std::isnan(setpoint)) setpoint = observable_flux(h, 0.0, phi_b, 0.0); // lock-on capture

  ExperimentTrace trace;
  trace.lock_setpoint = setpoint;
  trace.rows.reserve(static_cast<std::size_t>(proto.ramp_steps));

  double integral = 0.0;
  double i_a = 0.0;
  int front = 0;
  int growth = 0;
  double prev_abs_err = std::numeric_limits<double>::infinity();
  double prev_f = 0.0;

  for (int t = 0; t < proto.ramp_steps; ++t) {
    const double temp =
        proto.t_start + (proto.t_end - proto.t_start) * (t + 1) / static_cast<double>(proto.ramp_steps);
    if (temp < t_c && front < proto.front_steps) ++front;
    const double f = static_cast<double>(front) / proto.front_steps;

    const double phi_obs = observable_flux(h, spec.mutual_inductance_a * i_a, phi_b, f);
    if (!std::isfinite(phi_obs))
      throw InstabilityError("run_experiment: observable flux left the finite range", trace);
    const double err = setpoint - phi_obs;
    integral += err;
    i_a = (proto.k_p * err + proto.k_i * integral) / spec.mutual_inductance_a;

    TraceRow row;
    row.step = t;
    row.temperature = temp;
    row.shielded_fraction = f;
    row.i_a = i_a; // command carried into the next step
    row.phi_a = spec.mutual_inductance_a * i_a;
    row.phi_b = phi_b;
    row.phi_obs = phi_obs;
    row.i_c = critical_current(spec, phi_obs);
    trace.rows.push_back(row);

    // Divergence watch. While the cooling front moves, the lock error rises
    // towards its ramp-tracking value by design, so growth only counts
    // against a stationary front.
    const double abs_err = std::abs(err);
    if (f == prev_f && abs_err > prev_abs_err) {
      if (++growth >= 100)
        throw InstabilityError("run_experiment: controller error grew over 100 consecutive steps",
                               trace);
    } else {
      growth = 0;
    }
    prev_abs_err = abs_err;
    prev_f = f;
  }

  trace.final_total_flux_quanta = (trace.rows.back().phi_a + phi_b) / phi0;
  return trace;
}

} // namespace fluxsim
