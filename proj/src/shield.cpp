#include "fluxsim/shield.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "fluxsim/constants.hpp"
#include "fluxsim/interaction.hpp"

namespace fluxsim {

ShieldSpec ShieldSpec::make(double critical_temperature, double energy_gap_ev,
                            double penetration_depth, double thickness, double b_shield,
                            double gap_threshold_multiplier) {
  if (!(critical_temperature > 0.0))
    throw std::invalid_argument("ShieldSpec: critical_temperature must be positive");
  if (!(energy_gap_ev > 0.0)) throw std::invalid_argument("ShieldSpec: energy_gap_ev must be positive");
  if (!(penetration_depth > 0.0))
    throw std::invalid_argument("ShieldSpec: penetration_depth must be positive");
  if (!(thickness > 0.0)) throw std::invalid_argument("ShieldSpec: thickness must be positive");
  if (!(b_shield > 0.0)) throw std::invalid_argument("ShieldSpec: b_shield must be positive");
  if (!(gap_threshold_multiplier > 0.0))
    throw std::invalid_argument("ShieldSpec: gap_threshold_multiplier must be positive");
  ShieldSpec s;
  s.critical_temperature = critical_temperature;
  s.energy_gap_ev = energy_gap_ev;
  s.penetration_depth = penetration_depth;
  s.thickness = thickness;
  s.b_shield = b_shield;
  s.gap_threshold_multiplier = gap_threshold_multiplier;
  return s;
}

PulseSpectrum pulse_spectrum(double speed, double impact_parameter, int samples,
                             ExecPolicy policy) {
  if (!(speed > 0.0)) throw std::invalid_argument("pulse_spectrum: speed must be positive");
  if (!(impact_parameter > 0.0))
    throw std::invalid_argument("pulse_spectrum: impact parameter must be positive");
  if (samples < 64 || (samples & (samples - 1)) != 0)
    throw std::invalid_argument("pulse_spectrum: samples must be a power of two >= 64");

  // Transverse field of the passing electron at perpendicular distance b:
  // |B|(t) = (mu0 e v / 4 pi) b / (v^2 t^2 + b^2)^(3/2).
  const int n = samples;
  const double b = impact_parameter;
  const double window = 40.0 * b / speed; // t in [-20 b/v, +20 b/v)
  const double dt = window / n;
  const double pref =
      constants::mu0 * constants::elem_charge * speed / (4.0 * constants::pi);
  std::vector<double> signal(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = -0.5 * window + i * dt;
    const double d2 = speed * speed * t * t + b * b;
    signal[static_cast<std::size_t>(i)] = pref * b / (d2 * std::sqrt(d2));
  }

  const int bins = n / 2 + 1;
  PulseSpectrum out;
  out.frequencies.resize(static_cast<std::size_t>(bins));
  out.amplitudes.resize(static_cast<std::size_t>(bins));
  // one DFT bin per slot; |X_k| dt approximates the continuous transform
  parallel_for(static_cast<std::size_t>(bins), policy, [&](std::size_t k) {
    std::complex<double> acc{0.0, 0.0};
    const double w = -constants::two_pi * static_cast<double>(k) / n;
    for (int i = 0; i < n; ++i)
      acc += signal[static_cast<std::size_t>(i)] *
             std::complex<double>{std::cos(w * i), std::sin(w * i)};
    out.frequencies[k] = static_cast<double>(k) / window;
    out.amplitudes[k] = std::abs(acc) * dt;
  });

  double num = 0.0, den = 0.0;
  for (int k = 0; k < bins; ++k) {
    num += out.frequencies[static_cast<std::size_t>(k)] * out.amplitudes[static_cast<std::size_t>(k)];
    den += out.amplitudes[static_cast<std::size_t>(k)];
  }
  out.centroid_frequency = num / den;
  out.photon_energy_ev =
      constants::planck_h * out.centroid_frequency / constants::elem_charge;
  return out;
}

bool shields_dc(const ShieldSpec& spec, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("shields_dc: temperature must be positive");
  return temperature < spec.critical_temperature && spec.thick();
}

bool shields_ac(const ShieldSpec& spec, double temperature, double photon_energy_ev) {
  if (photon_energy_ev < 0.0)
    throw std::invalid_argument("shields_ac: photon energy must be nonnegative");
  return shields_dc(spec, temperature) &&
         photon_energy_ev < spec.energy_gap_ev * spec.gap_threshold_multiplier;
}

double effective_interaction_energy(const ChargeState& c, const SolenoidSpec& s,
                                    const ShieldSpec& shield, double temperature, double tol,
                                    int samples, ExecPolicy policy) {
  if (!(shield.b_shield > s.radius))
    throw std::domain_error("effective_interaction_energy: shield must enclose the solenoid");
  if (!(s.rho_of(c.position) > shield.b_shield))
    throw std::domain_error("effective_interaction_energy: charge must be outside the shield");
  const double speed = c.velocity.norm();
  const double photon_ev =
      speed > 0.0 ? pulse_spectrum(speed, shield.b_shield, samples, policy).photon_energy_ev : 0.0;
  if (shields_ac(shield, temperature, photon_ev)) return 0.0;
  return interaction_energy_integral(c, s, tol, nullptr, nullptr, policy);
}

} // namespace fluxsim
