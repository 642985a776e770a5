#pragma once

// Excitation transfer |10> -> |01> with the cavity relaxation neglected.

#include "rydchip/cavity_model.hpp"

#include <vector>

namespace rydchip {

/// p01(t) averaged over the thermal photon distribution, with P(n)
/// renormalised over [0, n_max] as in the ensemble and the master equation.
/// Each sector is diagonalised once; evaluation is then cheap for many times t (1/g).
class AnalyticTransfer {
 public:
  explicit AnalyticTransfer(const CavityGateConfig& cfg);

  double p01(double t) const;
  const PhotonDistribution& distribution() const { return dist_; }

 private:
  struct Sector {
    double weight;
    Eigen::VectorXd energies;
    Eigen::VectorXcd start;   // eigenbasis overlaps with |10,n>
    Eigen::VectorXcd target;  // eigenbasis components of |01,n>
  };
  std::vector<Sector> sectors_;
  PhotonDistribution dist_;
  double gamma_;
};

double analytic_transfer_probability(const CavityGateConfig& cfg, double t);

struct TransferPeak {
  double t = 0.0;  // 1/g
  double p01 = 0.0;
};

/// First maximum of p01 in [0, 1.2 pi |delta_c| / (2 g^2)].
TransferPeak transfer_peak(const CavityGateConfig& cfg);
TransferPeak transfer_peak(const AnalyticTransfer& model, double delta_over_g);

struct DetuningOptimum {
  double delta_c_over_g = 0.0;
  double t_tr = 0.0;  // 1/g
  double p01_max = 0.0;
  int n_max = 0;
  double truncation_mass = 0.0;
};

/// Maximises p01 over delta_c in [2 g sqrt(n_max), 200 g] and t. cfg.delta_c
/// is ignored. Throws Error(UnboundedOptimum) for gamma = 0 with n_th > 0.
DetuningOptimum optimize_detuning(const CavityGateConfig& cfg);

}  // namespace rydchip
