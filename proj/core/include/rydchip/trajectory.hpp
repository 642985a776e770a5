#pragma once

// Monte Carlo wavefunction trajectories of the two-qubit cavity system.

#include "rydchip/cavity_model.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace rydchip {

struct TrajectoryOptions {
  bool start_in_01 = false;  // start in |01,n> instead of |10,n>
};

struct TrajectoryRecord {
  std::vector<std::array<double, 4>> populations;  // p00, p01, p10, p11 per sample
  std::vector<double> bell_fidelity;                // |<B|psi>|^2 per sample
  int initial_photons = 0;
  int cavity_jumps = 0;
  int atomic_losses = 0;
};

/// Target Bell state (|10> - i s |01>)/sqrt(2) with s = sign of G = -g^2/delta_c.
/// The free exchange reaches it from |10> after a quarter period.
double bell_phase_sign(const CavityGateConfig& cfg);

/// One trajectory of stream (seed, index), sampled at the sorted times in
/// [0, t_end] (1/g). Populations are those of the normalised state; after an
/// atom is lost they read zero, while the cavity keeps evolving so jump
/// counts over [0, t_end] stay complete.
TrajectoryRecord run_trajectory(const CavityGateConfig& cfg, std::uint64_t seed, std::uint64_t index,
                                double t_end, std::span<const double> sample_times,
                                const TrajectoryOptions& options = {});

struct MeanWithError {
  double mean = 0.0;
  double stderr_ = 0.0;
};

struct TrajectoryEnsembleResult {
  std::vector<double> times;
  std::array<std::vector<MeanWithError>, 4> p;  // p00, p01, p10, p11
  std::vector<MeanWithError> p_tot;
  std::vector<MeanWithError> fidelity;  // Bell fidelity at each sample
  MeanWithError cavity_jumps;
  MeanWithError atomic_losses;
  int M = 0;
  std::uint64_t seed = 0;
  int n_max = 0;
  double truncation_mass = 0.0;
};

/// Mean of M trajectories; trajectory m uses stream (seed, m). Reductions
/// run in index order, so the result is independent of the worker count.
TrajectoryEnsembleResult simulate_ensemble(const CavityGateConfig& cfg, int M, std::uint64_t seed, double t_end,
                                           std::span<const double> sample_times,
                                           const TrajectoryOptions& options = {});

/// Bell fidelity at time t (1/g), with its standard error.
MeanWithError bell_fidelity_at(const CavityGateConfig& cfg, int M, std::uint64_t seed, double t);

/// Bell fidelity at half the transfer time of the analytic exchange.
MeanWithError bell_fidelity(const CavityGateConfig& cfg, int M, std::uint64_t seed);

}  // namespace rydchip
