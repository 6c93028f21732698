#include "fluxsim/interference.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace fluxsim {

FluxQuanta FluxQuanta::from_flux(double wb) {
  if (!std::isfinite(wb)) throw std::invalid_argument("FluxQuanta: flux must be finite");
  FluxQuanta f;
  f.flux = wb;
  f.n_superconducting_quanta = wb / constants::phi0_sc;
  return f;
}

FluxQuanta FluxQuanta::from_quanta(double n) {
  if (!std::isfinite(n)) throw std::invalid_argument("FluxQuanta: quanta count must be finite");
  FluxQuanta f;
  f.flux = n * constants::phi0_sc;
  f.n_superconducting_quanta = n;
  return f;
}

double ab_phase(double flux_wb) {
  if (!std::isfinite(flux_wb)) throw std::invalid_argument("ab_phase: flux must be finite");
  // 2 pi Phi / (h/e); the phase quantum is h/e, not the superconducting h/2e
  return constants::two_pi * flux_wb / constants::flux_quantum_phase;
}

namespace {

// Phase folded onto a 2^-32-turn lattice. Offsets that differ by an exact
// multiple of 2 pi land on the same lattice point, which is what makes
// periodic patterns bit-identical rather than merely close.
double quantize_phase(double phase) {
  const double steps_per_turn = 4294967296.0; // 2^32
  const double turns = phase / constants::two_pi;
  const double step = std::round(turns * steps_per_turn);
  const double folded = step - steps_per_turn * std::floor(step / steps_per_turn);
  return constants::two_pi * (folded / steps_per_turn);
}

} // namespace

FringePattern fringe_pattern(double delta_phi, double gradient, const std::vector<double>& screen) {
  if (gradient == 0.0 || !std::isfinite(gradient))
    throw std::invalid_argument("fringe_pattern: phase gradient must be nonzero and finite");
  if (screen.empty()) throw std::domain_error("fringe_pattern: screen position list is empty");
  FringePattern p;
  p.phase_offset = delta_phi;
  p.positions = screen;
  p.intensities.reserve(screen.size());
  const double folded = quantize_phase(delta_phi);
  for (double x : screen) p.intensities.push_back(0.5 * (1.0 + std::cos(gradient * x + folded)));
  return p;
}

bool parity_distinguishable(double flux_a_wb, double flux_b_wb, bool shielded) {
  if (shielded) return false; // decoupled charge, patterns identical regardless of flux
  const double diff = ab_phase(flux_a_wb) - ab_phase(flux_b_wb);
  // distance to the nearest multiple of 2 pi
  const double folded = std::remainder(diff, constants::two_pi);
  return std::abs(folded) > 1e-9;
}

} // namespace fluxsim
