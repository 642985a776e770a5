#pragma once

// Full Lindblad master equation over {0, 1, l}^2 x {0..dynamic_max_base+1}
// (the same photon range as the trajectory sectors). Used as an independent check of
// the trajectory ensemble.

#include "rydchip/cavity_model.hpp"

#include <array>
#include <span>
#include <vector>

namespace rydchip {

struct OracleResult {
  std::vector<double> times;
  std::vector<std::array<double, 4>> populations;  // p00, p01, p10, p11
  std::vector<double> p_tot;
  std::vector<double> trace;
};

struct OracleOptions {
  bool start_in_01 = false;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
};

inline constexpr int kOracleMaxCutoff = 12;

/// Integrates d rho/dt from rho(0) = sum_n P(n) |10,n><10,n| (P normalised
/// on [0, n_max]). Throws Error(OracleScope) for n_max > 12.
OracleResult master_equation_oracle(const CavityGateConfig& cfg, std::span<const double> sample_times,
                                    const OracleOptions& options = {});

}  // namespace rydchip
