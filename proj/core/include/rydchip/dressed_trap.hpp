#pragma once

// Microwave-dressed trapping potentials for a Rydberg state |r> coupled to an
// auxiliary state |a> with a static dipole moment of the opposite sign.
//
// Units: dipole moments in h*MHz/(V/cm), microwave detuning in GHz (cycles),
// Rabi frequency in MHz (cycles), energies in h*MHz, lengths in um. Trap
// force constants are reported in N/m, vibrational frequency in rad/s, and
// ground-state width in nm.

#include "rydchip/field_model.hpp"
#include "rydchip/units.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace rydchip {

struct DressingPair {
  double d_main = 400.0;    // d_r or d_s
  double d_aux = -400.0;    // d_a or d_b
  double detuning = -1.6;   // GHz, Delta = omega - omega_res
  double rabi = 30.0;       // MHz, > 0
  std::optional<double> omega_res;  // GHz, unperturbed transition frequency (metadata)

  void validate() const;

  double detuning_mhz() const { return detuning * 1e3; }
  double dipole_difference() const { return d_main - d_aux; }
  double dipole_sum() const { return d_main + d_aux; }
};

struct TrapParams {
  double z_min = 0.0;           // um
  double z_cross = 0.0;         // um
  double force_constant = 0.0;  // N/m
  double vib_freq = 0.0;        // rad/s
  double width = 0.0;           // nm
  double E_min = 0.0;           // h*MHz
  double atom_mass = units::rb87_mass;  // kg

  double vib_freq_hz() const { return vib_freq / units::two_pi; }
};

/// Fills vib_freq and width from force_constant and atom_mass. Throws
/// Error(NoTrap) for a non-positive force constant.
TrapParams make_trap(double z_min, double z_cross, double force_constant, double E_min, double atom_mass);

// --- dressed states --------------------------------------------------------

/// Local detuning Delta_bar(z) = Delta + (d_main - d_aux)|F(z)|/h, in MHz.
double local_detuning(double field_magnitude, const DressingPair& pair);

struct DressedEnergies {
  double plus = 0.0;   // h*MHz
  double minus = 0.0;  // h*MHz
};

/// Both dressed branches for a given local field magnitude |F| (V/cm).
DressedEnergies dressed_energies_at_field(double field_magnitude, const DressingPair& pair);

/// Both dressed branches at height z on the symmetry axis of `field`.
DressedEnergies dressed_energies(double z, const DressingPair& pair, const FieldProvider& field);

/// Amplitudes of |r> (main) and |a> (aux) in the upper dressed state |r+>.
/// Convention: the amplitude of |a> is non-negative and the |r> amplitude is
/// non-positive, so |r+> -> |a> as Delta_bar -> +inf and |r+> -> -|r> as
/// Delta_bar -> -inf.
struct DressedMixing {
  double amp_main = 0.0;
  double amp_aux = 0.0;
};
DressedMixing dressed_mixing_at_field(double field_magnitude, const DressingPair& pair);
DressedMixing dressed_mixing(double z, const DressingPair& pair, const FieldProvider& field);

// --- exponential-model trap ------------------------------------------------

/// Crossing height z0 of the bare (Omega -> 0) levels in the exponential
/// field. Throws Error(NoCrossing) if the required field value is never
/// reached and Error(CrossingBelowSurface) if z0 < 0.
double crossing_position(const DressingPair& pair, const FieldConfig& cfg);

/// Closed-form harmonic trap in the exponential field, including the first
/// order corrections for |d_main| != |d_aux|. Reduces exactly to z_min = z0
/// for d_main = -d_aux.
TrapParams harmonic_trap_params(const DressingPair& pair, const FieldConfig& cfg,
                                double atom_mass = units::rb87_mass);

/// Trap located by golden-section minimisation of E+ on the symmetry axis of
/// any field provider (tolerance 1e-6 um). The force constant is the central
/// second difference of E+ at the minimum.
TrapParams numerical_trap(const DressingPair& pair, const FieldProvider& field,
                          double atom_mass = units::rb87_mass);

/// Height where the bare levels cross on the axis of an arbitrary provider,
/// found by bisection over (z_lo, z_hi).
double crossing_position_numeric(const DressingPair& pair, const FieldProvider& field,
                                 double z_lo = 1e-3, double z_hi = 1e3);

struct TrapScanRow {
  double F_bias = 0.0;
  std::optional<TrapParams> trap;
  std::string failure;  // set when no trap exists at this bias
};

/// Trap parameters at n evenly spaced bias values in [lo, hi]. Bias values
/// without a crossing or trap yield rows with `failure` set.
std::vector<TrapScanRow> trap_scan_vs_bias(const DressingPair& pair, const FieldConfig& cfg, double lo,
                                           double hi, int n, double atom_mass = units::rb87_mass);

struct PotentialMap {
  AxisRange x;
  AxisRange z;
  std::vector<double> e_plus;  // h*MHz, index = iz * x.n + ix

  double at(int ix, int iz) const { return e_plus[static_cast<size_t>(iz) * x.n + ix]; }
};

/// E+ over the y=0 plane using the local |F(x, 0, z)| of `field`.
PotentialMap potential_map_2d(const DressingPair& pair, const FieldProvider& field, const AxisRange& x,
                              const AxisRange& z);

/// Exponential model matched to the adsorbate part of `field` on the axis at
/// height z: same value and logarithmic slope. The bias is carried over.
FieldConfig local_exponential_fit(const FieldProvider& field, double z);

// --- second trapped state --------------------------------------------------

struct Colocation {
  DressingPair second;            // (d_s, d_b, Delta', Omega')
  double detuning_uncorrected = 0.0;  // GHz, Delta' from the dipole ratio alone
  double offset_uncorrected = 0.0;    // um, z_min' - z_min before correction
  TrapParams primary;
  TrapParams secondary;
  double franck_condon = 0.0;
};

/// Dresses (d_s, d_b) so that its trap has the same frequency as the primary
/// pair's trap and the same minimum. The detuning is first scaled by the
/// dipole-difference ratio and the Rabi frequency by its square; for
/// asymmetric dipoles the detuning is then shifted until the numerically
/// located minima agree to 1e-4 um. Throws Error(Colocation) if no detuning in
/// the search bracket aligns them.
Colocation colocate_second_trap(const DressingPair& primary, double d_s, double d_b, const FieldConfig& cfg,
                                double atom_mass = units::rb87_mass);

// --- qubit ----------------------------------------------------------------

/// Overlap of two harmonic-oscillator ground states.
double franck_condon(const TrapParams& a, const TrapParams& b);

struct QubitParams {
  double omega0 = 0.0;   // GHz
  double omega1 = 0.0;   // GHz
  double omega10 = 0.0;  // GHz
  double franck_condon = 0.0;
  double dipole_sr = 0.0;  // a0 e
  double dipole_01 = 0.0;  // a0 e
};

/// Qubit |0> = |s+> chi_s, |1> = |r+> chi_r. `level_r`, `level_s` are the
/// unperturbed level frequencies omega_r, omega_s in GHz. The dressing and
/// zero-point terms add Omega/2 (cycles) and nu/2 (angular, converted to
/// cycles) to each level.
QubitParams qubit_params(const TrapParams& trap_r, const TrapParams& trap_s, const DressingPair& pair_r,
                         const DressingPair& pair_s, double level_r, double level_s, double dipole_sr,
                         const FieldConfig& cfg);

enum class RotationBranch { Resonant, Dispersive };

struct QubitRotation {
  Eigen::Matrix2cd unitary;  // acts on (|0>, |1>)
  double duration_us = 0.0;
  RotationBranch branch = RotationBranch::Resonant;
};

/// Drive phase selecting the rotation axis in the Bloch-sphere frame used
/// here: phase -pi/2 is the x axis and phase 0 the y axis.
inline constexpr double kPhaseX = -units::pi / 2.0;
inline constexpr double kPhaseY = 0.0;

/// Single-qubit rotation by a microwave pulse. With detuning_q == 0 the pulse
/// of area theta maps |0> -> cos(theta/2)|0> + i e^{i phase} sin(theta/2)|1>.
/// With |detuning_q| >= 10 rabi_q the opposite light shifts -/+ rabi^2/(2 det)
/// of |0>, |1> accumulate phase theta each. Anything in between throws
/// Error(Regime). Frequencies in MHz (cycles).
QubitRotation qubit_rotation(double theta, double phase, double detuning_q, double rabi_q);

struct StarkLinearity {
  double ratio = 0.0;  // Delta F / F at the trap
  bool warn = false;   // ratio >= 0.05
};

/// Relative field variation across the trapped wavefunction, F0 sigma / zeta
/// divided by F(z0). Throws Error(Domain) when F(z0) vanishes.
StarkLinearity stark_linearity_check(const TrapParams& trap, const FieldConfig& cfg);

}  // namespace rydchip
