#pragma once

// Physical constants (CODATA 2018, SI) and conversions between the units
// used on the public interfaces (V/cm, um, MHz/GHz in cycles, h*MHz) and SI.

#include <numbers>

namespace rydchip::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double planck = 6.62607015e-34;         // J s
inline constexpr double hbar = planck / two_pi;          // J s
inline constexpr double boltzmann = 1.380649e-23;        // J/K
inline constexpr double epsilon0 = 8.8541878128e-12;     // F/m
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double bohr_radius = 5.29177210903e-11;      // m

// 87Rb atomic mass.
inline constexpr double rb87_mass = 1.44316060e-25;  // kg

inline constexpr double um = 1e-6;     // m
inline constexpr double nm = 1e-9;     // m
inline constexpr double cm = 1e-2;     // m
inline constexpr double mhz = 1e6;     // Hz
inline constexpr double ghz = 1e9;     // Hz
inline constexpr double v_per_cm = 100.0;  // V/m

/// C/um^2 -> C/m^2
inline constexpr double charge_density_to_si(double c_per_um2) { return c_per_um2 / (um * um); }

/// V/m -> V/cm
inline constexpr double to_v_per_cm(double v_per_m) { return v_per_m / v_per_cm; }

/// Frequency in cycles (Hz) -> angular frequency (rad/s).
inline constexpr double angular(double hz) { return two_pi * hz; }

/// Energy quoted as h*MHz -> J.
inline constexpr double h_mhz_to_joule(double e) { return e * planck * mhz; }

/// Curvature in h*MHz/um^2 -> N/m.
inline constexpr double curvature_to_si(double h_mhz_per_um2) {
  return h_mhz_to_joule(h_mhz_per_um2) / (um * um);
}

/// Dipole moment in units of a0*e -> C m.
inline constexpr double dipole_to_si(double a0e) { return a0e * bohr_radius * elementary_charge; }

}  // namespace rydchip::units
