#pragma once

#include <vector>

#include "fluxsim/constants.hpp"

// A-B phase, fringe rendering, and the flux-parity distinguishability test.

namespace fluxsim {

// Flux with its superconducting quantization bookkeeping. The quantization
// unit is h/2e; the phase formula uses h/e. Keeping the conversion in one
// type prevents the two from being swapped.
struct FluxQuanta {
  double flux = 0.0;                    // Wb
  double n_superconducting_quanta = 0.0; // flux / (h/2e)

  static FluxQuanta from_flux(double wb);
  static FluxQuanta from_quanta(double n);
};

struct FringePattern {
  std::vector<double> positions;   // m
  std::vector<double> intensities; // normalized, peak 1
  double phase_offset = 0.0;       // rad
};

// Delta_phi = 2 pi Phi / (h/e).
double ab_phase(double flux_wb);

// Two-beam pattern I(x) = (1 + cos(g x + delta_phi)) / 2. The phase enters
// through a 2^-32-turn lattice so that offsets differing by exact multiples
// of 2 pi render bit-identical patterns.
FringePattern fringe_pattern(double delta_phi, double gradient, const std::vector<double>& screen);

// Can the two enclosed fluxes be told apart from the pattern? Always false
// when the shield decouples the charge (W' = 0 regime); otherwise true iff
// the phases differ by something other than a multiple of 2 pi (1e-9 rad
// resolution).
bool parity_distinguishable(double flux_a_wb, double flux_b_wb, bool shielded);

} // namespace fluxsim
