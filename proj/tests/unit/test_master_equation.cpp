#include "rydchip/error.hpp"
#include "rydchip/master_equation.hpp"
#include "rydchip/trajectory.hpp"
#include "rydchip/transfer.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rydchip;

namespace {

CavityGateConfig small_gate(double kappa, double gamma) {
  CavityGateConfig c;
  c.g = 1.0;
  c.delta_c = 10.0;
  c.kappa = kappa;
  c.gamma = gamma;
  c.n_th = 0.3;
  c.n_max = 4;
  return c;
}

std::vector<double> grid(double t_end, int n) {
  std::vector<double> t;
  for (int i = 1; i <= n; ++i) t.push_back(t_end * i / n);
  return t;
}

}  // namespace

TEST(MasterEquation, ClosedSystemMatchesAnalytic) {
  const CavityGateConfig c = small_gate(0.0, 0.0);
  const auto times = grid(40.0, 10);
  OracleOptions tight;
  tight.abs_tol = tight.rel_tol = 1e-11;
  const OracleResult r = master_equation_oracle(c, times, tight);
  ASSERT_EQ(r.times.size(), times.size());
  for (size_t k = 0; k < times.size(); ++k) {
    EXPECT_NEAR(r.populations[k][1], analytic_transfer_probability(c, times[k]), 1e-6) << times[k];
  }
}

TEST(MasterEquation, TracePreserved) {
  const CavityGateConfig c = small_gate(0.05, 0.02);
  const OracleResult r = master_equation_oracle(c, grid(60.0, 12));
  for (size_t k = 0; k < r.times.size(); ++k) {
    EXPECT_NEAR(r.trace[k], 1.0, 1e-8);
    EXPECT_LE(r.p_tot[k], 1.0 + 1e-10);
  }
  EXPECT_LT(r.p_tot.back(), 0.2);
}

TEST(MasterEquation, UniformAtomicDecay) {
  const CavityGateConfig c = small_gate(0.0, 0.01);
  const OracleResult r = master_equation_oracle(c, grid(50.0, 5));
  for (size_t k = 0; k < r.times.size(); ++k) EXPECT_NEAR(r.p_tot[k], std::exp(-0.02 * r.times[k]), 1e-8);
}

TEST(MasterEquation, ScopeLimit) {
  CavityGateConfig c = small_gate(0.0, 0.0);
  c.n_th = 1.3;
  c.n_max = 13;
  const std::vector<double> t{1.0};
  try {
    master_equation_oracle(c, t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OracleScope);
  }
}

TEST(MasterEquation, SymmetricStart) {
  const CavityGateConfig c = small_gate(0.0, 0.0);
  OracleOptions opt;
  opt.start_in_01 = true;
  const std::vector<double> t{15.0};
  const OracleResult a = master_equation_oracle(c, t);
  const OracleResult b = master_equation_oracle(c, t, opt);
  EXPECT_NEAR(a.populations[0][1], b.populations[0][2], 1e-8);
}

// All four populations at 12 times: 48 comparisons, so a Bonferroni-style
// 4 standard errors.
TEST(MasterEquation, AgreesWithTrajectoryEnsemble) {
  const CavityGateConfig c = small_gate(0.02, 0.005);
  const auto times = grid(2.0 * transfer_peak(c).t, 12);
  const OracleResult oracle = master_equation_oracle(c, times);
  const TrajectoryEnsembleResult ens = simulate_ensemble(c, 4000, 1, times.back(), times);
  for (size_t k = 0; k < times.size(); ++k) {
    for (int j = 0; j < 4; ++j) {
      EXPECT_NEAR(ens.p[j][k].mean, oracle.populations[k][j], 4.0 * ens.p[j][k].stderr_ + 1e-12)
          << "t=" << times[k] << " j=" << j;
    }
  }
}
