#pragma once

// Two qubits coupled to one thermal cavity mode. Frequencies g, delta_c are
// given in MHz (cycles); the decay rates kappa, gamma are given in units of
// g. Internally the dynamics run in units where g = 1, so times are in 1/g
// (angular).

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace rydchip {

struct CavityGeometry {
  double length_cm = 1.0;  // stripline length L
  double gap_um = 10.0;    // gap D, also the mode decay length
};

struct CavityGateConfig {
  double g = 5.0;           // MHz
  double delta_c = 250.0;   // MHz, omega_c - omega_10
  double kappa = 1e-3;      // units of g
  double gamma = 3e-4;      // units of g
  double n_th = 0.0;
  std::optional<int> n_max;  // default: default_cutoff(n_th)
  double omega_c = 20.488;   // GHz, for temperature conversions only
  std::optional<CavityGeometry> geometry;

  /// Throws Error(Domain) on g <= 0, negative rates or n_th, or an explicit
  /// n_max below max(4, ceil(10 n_th)).
  void validate() const;
  /// n_max if set, otherwise default_cutoff(n_th).
  int cutoff() const;
  double detuning_over_g() const { return delta_c / g; }
};

/// Bose-Einstein occupation of a mode at omega_c (GHz, cycles) and T (K).
double thermal_occupation(double omega_c_ghz, double temperature_k);

struct PhotonDistribution {
  std::vector<double> p;  // P(n), n = 0..n_max
  double truncation_mass = 0.0;
};

/// Thermal P(n) = n_th^n / (1 + n_th)^(n+1) on [0, n_max]. Throws Error(Cutoff)
/// when the mass beyond n_max exceeds 1e-3.
PhotonDistribution photon_distribution(double n_th, int n_max);

/// Smallest n_max >= max(4, ceil(10 n_th)) whose truncation mass is <= 1e-3.
int default_cutoff(double n_th);

/// Highest base photon number reached by the ensemble dynamics. n_max
/// truncates the initial thermal distribution; thermal gain can push a
/// trajectory above it, so the dynamics carry max(4, n_max / 2) sectors of
/// headroom. A gain past this still raises Error(Cutoff).
int dynamic_max_base(int n_max);

/// Vacuum coupling g (MHz, cycles) of a transition dipole (a0 e) to a
/// coplanar mode of frequency omega_c (GHz), length L (cm) and gap D (um) at
/// height z (um): mode volume 2 pi D^2 L, profile exp(-z/D).
double cavity_coupling(double dipole_01, double omega_c_ghz, double length_cm, double gap_um, double z_um);

/// Second-order exchange rate G = -g^2/delta_c (MHz). Throws Error(Domain)
/// for delta_c == 0.
double exchange_rate(double g, double delta_c, int n);

/// True when |delta_c| >= 5 g sqrt(n + 1), where exchange_rate is reliable.
bool exchange_regime_ok(double g, double delta_c, int n);

/// pi / (2|G|) in microseconds.
double exchange_transfer_time_us(double g, double delta_c);

/// Excitation sector of the two-qubit system with base photon number n over
/// (|10,n>, |01,n>, |00,n+1>, |11,n-1>); base_n = 0 has no |11> slot and
/// three amplitudes. Sectors run over base_n in [0, n_max], so photon
/// numbers reach n_max + 1. A cavity loss from base_n = 0 leaves |00,0>,
/// reported as base_n = -1 with one amplitude.
struct SectorState {
  int base_n = 0;
  Eigen::VectorXcd amplitudes;
  bool lost = false;
  double time = 0.0;  // 1/g
};

/// Number of slots present in the sector with this base photon number.
int sector_size(int base_n, int n_max);

/// Effective non-Hermitian Hamiltonian of one sector in units of g. The
/// Hermitian part has diagonal (0, 0, +delta_c, -delta_c) and couplings
/// g sqrt(n+1), g sqrt(n); the anti-Hermitian part is -(i/2) sum L^dag L for
/// atomic decay (gamma per atom) and thermal cavity loss and gain.
Eigen::MatrixXcd sector_hamiltonian(int base_n, const CavityGateConfig& cfg);

enum class JumpChannel {
  DecayAtom1From1,
  DecayAtom1From0,
  DecayAtom2From1,
  DecayAtom2From0,
  CavityLoss,
  CavityGain,
};

/// Applies one jump operator to a sector state and renormalises. Atomic
/// decay returns a lost state with no amplitudes. Throws Error(Cutoff) when a
/// gain jump would leave the sector range [0, n_max], and Error(Domain) when
/// the channel annihilates the state.
SectorState apply_jump(const SectorState& state, JumpChannel channel, const CavityGateConfig& cfg);

}  // namespace rydchip
