#pragma once

#include <vector>

#include "fluxsim/fields.hpp"
#include "fluxsim/parallel.hpp"

// Meissner shielding with the frequency criterion: a superconducting wall
// stops a field only when it is cold, thick, and the field's spectral
// content sits below the pair-breaking gap.

namespace fluxsim {

struct ShieldSpec {
  double critical_temperature = 9.2; // K
  double energy_gap_ev = 3e-3;       // eV
  double penetration_depth = 3.9e-8; // m
  double thickness = 1e-6;           // m
  double b_shield = 6.366e-7;        // m, geometric radius; default pulse impact parameter
  double gap_threshold_multiplier = 1.0; // compare h nu against multiplier * gap

  static ShieldSpec make(double critical_temperature, double energy_gap_ev, double penetration_depth,
                         double thickness, double b_shield, double gap_threshold_multiplier = 1.0);

  bool thick() const { return thickness >= 5.0 * penetration_depth; }
};

struct PulseSpectrum {
  std::vector<double> frequencies; // Hz
  std::vector<double> amplitudes;  // relative |DFT|, >= 0
  double centroid_frequency = 0.0; // Hz, amplitude-weighted
  double photon_energy_ev = 0.0;   // h * centroid / e
};

// Spectrum of the field pulse a passing charge paints at perpendicular
// distance b: |B|(t) ~ b / (v^2 t^2 + b^2)^(3/2) sampled over
// t in [-20 b/v, +20 b/v], naive DFT, bins evaluated in parallel.
// samples must be a power of two >= 64.
PulseSpectrum pulse_spectrum(double speed, double impact_parameter, int samples,
                             ExecPolicy policy = default_policy());

// DC shielding: superconducting and thick-walled.
bool shields_dc(const ShieldSpec& spec, double temperature);

// AC shielding: DC conditions plus photon energy below the (scaled) gap.
bool shields_ac(const ShieldSpec& spec, double temperature, double photon_energy_ev);

// Binary gate on the interaction energy: exactly zero when the shield holds,
// exactly the ungated value when it does not. The pulse is evaluated at the
// shield's geometric radius.
double effective_interaction_energy(const ChargeState& c, const SolenoidSpec& s,
                                    const ShieldSpec& shield, double temperature, double tol,
                                    int samples = 1024, ExecPolicy policy = default_policy());

} // namespace fluxsim
