#pragma once

// Physical constants, CODATA-2018. Everything in the library pulls SI
// values from this table; no constant is ever redefined locally.

namespace fluxsim::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double mu0 = 1.25663706212e-6;        // vacuum permeability, H/m
inline constexpr double planck_h = 6.62607015e-34;     // Planck constant, J*s (exact)
inline constexpr double hbar = 1.054571817e-34;        // reduced Planck constant, J*s
inline constexpr double elem_charge = 1.602176634e-19; // elementary charge, C (exact)
inline constexpr double c_light = 299792458.0;         // speed of light, m/s (exact)

// Flux quantum of a superconducting loop, h/2e. Distinct from the
// phase-formula quantum h/e below; mixing the two is the classic bug.
inline constexpr double phi0_sc = planck_h / (2.0 * elem_charge); // Wb
inline constexpr double flux_quantum_phase = planck_h / elem_charge; // Wb

// Validity bound of the non-relativistic field model.
inline constexpr double v_max_nonrelativistic = 0.01 * c_light; // m/s

} // namespace fluxsim::constants
