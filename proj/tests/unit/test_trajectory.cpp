#include "rydchip/cavity_model.hpp"
#include "rydchip/random.hpp"
#include "rydchip/trajectory.hpp"
#include "rydchip/transfer.hpp"
#include "rydchip/units.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <set>

using namespace rydchip;

namespace {

CavityGateConfig gate(double n_th, double kappa, double gamma, double delta) {
  CavityGateConfig c;
  c.g = 1.0;
  c.kappa = kappa;
  c.gamma = gamma;
  c.n_th = n_th;
  c.delta_c = delta;
  return c;
}

std::vector<double> grid(double t_end, int n) {
  std::vector<double> t;
  for (int i = 0; i <= n; ++i) t.push_back(t_end * i / n);
  t.back() = t_end;
  return t;
}

bool same(const TrajectoryEnsembleResult& a, const TrajectoryEnsembleResult& b) {
  if (a.times != b.times) return false;
  for (size_t k = 0; k < a.times.size(); ++k) {
    for (int j = 0; j < 4; ++j) {
      if (a.p[j][k].mean != b.p[j][k].mean || a.p[j][k].stderr_ != b.p[j][k].stderr_) return false;
    }
    if (a.fidelity[k].mean != b.fidelity[k].mean || a.p_tot[k].mean != b.p_tot[k].mean) return false;
  }
  return a.cavity_jumps.mean == b.cavity_jumps.mean && a.atomic_losses.mean == b.atomic_losses.mean;
}

}  // namespace

TEST(CounterRng, StreamsAreReproducibleAndDistinct) {
  CounterRng a(7, 3), b(7, 3), c(7, 4);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
    seen.insert(x);
  }
  EXPECT_EQ(seen.size(), 1000u);
  CounterRng u(1, 0);
  double mean = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = u.uniform();
    ASSERT_GT(x, 0.0);
    ASSERT_LT(x, 1.0);
    mean += x / 100000;
  }
  EXPECT_NEAR(mean, 0.5, 4.0 * std::sqrt(1.0 / 12 / 100000));
}

TEST(Trajectory, ClosedSystemFollowsAnalyticTransfer) {
  const CavityGateConfig c = gate(0.0, 0.0, 0.0, 50.0);
  const double t_end = 1.3 * units::pi * 50.0 / 2.0;
  const auto times = grid(t_end, 200);
  const TrajectoryRecord r = run_trajectory(c, 3, 0, t_end, times);
  EXPECT_EQ(r.cavity_jumps, 0);
  EXPECT_EQ(r.atomic_losses, 0);
  for (size_t k = 0; k < times.size(); ++k) {
    EXPECT_NEAR(r.populations[k][1], analytic_transfer_probability(c, times[k]), 1e-8) << times[k];
  }
}

TEST(Trajectory, ThermalClosedSystemMatchesAverage) {
  // Without jumps each trajectory is one sector; the ensemble samples P(n).
  CavityGateConfig c = gate(1.5, 0.0, 0.0, 25.0);
  const double t = 30.0;
  const std::vector<double> times{t};
  const TrajectoryEnsembleResult e = simulate_ensemble(c, 4000, 2, t, times);
  EXPECT_EQ(e.cavity_jumps.mean, 0.0);
  EXPECT_NEAR(e.p[1][0].mean, analytic_transfer_probability(c, t), 4.0 * e.p[1][0].stderr_);
}

TEST(Trajectory, LossZeroesPopulationsThereafter) {
  const CavityGateConfig c = gate(0.5, 0.01, 0.02, 20.0);
  const double t_end = 60.0;
  const auto times = grid(t_end, 120);
  int with_loss = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const TrajectoryRecord r = run_trajectory(c, 11, i, t_end, times);
    bool gone = false;
    for (size_t k = 0; k < times.size(); ++k) {
      const auto& p = r.populations[k];
      const double total = p[0] + p[1] + p[2] + p[3];
      if (total == 0.0) gone = true;
      if (gone) {
        ASSERT_EQ(total, 0.0);
        ASSERT_EQ(r.bell_fidelity[k], 0.0);
      } else {
        ASSERT_NEAR(total, 1.0, 1e-12);
      }
    }
    EXPECT_EQ(gone, r.atomic_losses > 0);
    with_loss += gone;
  }
  EXPECT_GT(with_loss, 50);
}

TEST(Ensemble, UniformDecayWithoutCavityLoss) {
  const double gamma = 0.01;
  const CavityGateConfig c = gate(1.0, 0.0, gamma, 20.0);
  const auto times = grid(80.0, 8);
  const TrajectoryEnsembleResult e = simulate_ensemble(c, 3000, 5, 80.0, times);
  EXPECT_EQ(e.p_tot[0].mean, 1.0);
  for (size_t k = 0; k < times.size(); ++k) {
    const double expected = std::exp(-2 * gamma * times[k]);
    EXPECT_NEAR(e.p_tot[k].mean, expected, 3.0 * e.p_tot[k].stderr_ + 1e-12) << times[k];
  }
}

TEST(Ensemble, InvariantsHold) {
  const CavityGateConfig c = gate(2.0, 0.01, 0.003, 30.0);
  const auto times = grid(100.0, 20);
  const TrajectoryEnsembleResult e = simulate_ensemble(c, 300, 9, 100.0, times);
  EXPECT_EQ(e.M, 300);
  EXPECT_EQ(e.seed, 9u);
  EXPECT_EQ(e.p_tot[0].mean, 1.0);
  for (size_t k = 0; k < times.size(); ++k) {
    const double sum = e.p[0][k].mean + e.p[1][k].mean + e.p[2][k].mean + e.p[3][k].mean;
    EXPECT_NEAR(e.p_tot[k].mean, sum, 1e-12);
    EXPECT_LE(e.p_tot[k].mean, 1.0 + 1e-12);
    EXPECT_GE(e.fidelity[k].mean, 0.0);
    EXPECT_LE(e.fidelity[k].mean, 1.0);
  }
}

TEST(Ensemble, DeterministicForSeed) {
  const CavityGateConfig c = gate(1.0, 0.01, 0.003, 22.0);
  const auto times = grid(70.0, 10);
  const auto a = simulate_ensemble(c, 200, 42, 70.0, times);
  const auto b = simulate_ensemble(c, 200, 42, 70.0, times);
  const auto other = simulate_ensemble(c, 200, 43, 70.0, times);
  EXPECT_TRUE(same(a, b));
  EXPECT_FALSE(same(a, other));
}

TEST(Ensemble, IndependentOfWorkerCount) {
  const CavityGateConfig c = gate(1.0, 0.01, 0.003, 22.0);
  const auto times = grid(70.0, 10);
  setenv("RYDCHIP_THREADS", "1", 1);
  const auto serial = simulate_ensemble(c, 200, 42, 70.0, times);
  setenv("RYDCHIP_THREADS", "4", 1);
  const auto threaded = simulate_ensemble(c, 200, 42, 70.0, times);
  unsetenv("RYDCHIP_THREADS");
  EXPECT_TRUE(same(serial, threaded));
}

TEST(Ensemble, MeansAreIndexOrderSums) {
  const CavityGateConfig c = gate(1.0, 0.02, 0.003, 22.0);
  const auto times = grid(50.0, 5);
  const int M = 64;
  const auto e = simulate_ensemble(c, M, 8, 50.0, times);
  for (size_t k = 0; k < times.size(); ++k) {
    double sum = 0.0, jumps = 0.0;
    for (int m = 0; m < M; ++m) {
      const TrajectoryRecord r = run_trajectory(c, 8, m, 50.0, times);
      sum += r.populations[k][1];
      if (k == 0) jumps += r.cavity_jumps;
    }
    EXPECT_EQ(e.p[1][k].mean, sum / M);
    if (k == 0) EXPECT_EQ(e.cavity_jumps.mean, jumps / M);
  }
}

TEST(Ensemble, StandardErrorIsSampleStandardDeviationOverRootM) {
  const CavityGateConfig c = gate(1.0, 0.02, 0.003, 22.0);
  const std::vector<double> times{40.0};
  const int M = 50;
  const auto e = simulate_ensemble(c, M, 4, 40.0, times);
  std::vector<double> x;
  for (int m = 0; m < M; ++m) x.push_back(run_trajectory(c, 4, m, 40.0, times).populations[0][1]);
  double mean = 0.0, ss = 0.0;
  for (double v : x) mean += v / M;
  for (double v : x) ss += (v - mean) * (v - mean);
  EXPECT_NEAR(e.p[1][0].stderr_, std::sqrt(ss / (M - 1) / M), 1e-14);
}

TEST(BellFidelity, ClosedSystemAtLargeDetuning) {
  const CavityGateConfig c = gate(0.0, 0.0, 0.0, 50.0);
  EXPECT_GE(bell_fidelity(c, 10, 1).mean, 0.99);
  EXPECT_EQ(bell_phase_sign(c), -1.0);
  EXPECT_EQ(bell_phase_sign(gate(0.0, 0.0, 0.0, -50.0)), 1.0);
}

TEST(BellFidelity, SingleLostTrajectoryGivesZero) {
  const CavityGateConfig c = gate(0.0, 0.0, 0.05, 20.0);
  const double half = 0.5 * transfer_peak(c).t;
  const std::vector<double> times{half};
  std::uint64_t seed = 1;
  while (run_trajectory(c, seed, 0, half, times).atomic_losses == 0) ++seed;
  const MeanWithError f = bell_fidelity(c, 1, seed);
  EXPECT_EQ(f.mean, 0.0);
}

TEST(JumpStatistics, CavityJumpRateMatchesThermalFormula) {
  // Stationary thermal field: loss + gain rate is 2 kappa n (n + 1).
  // Extra photon headroom: 4000 thermal walks of about 12 jumps each.
  CavityGateConfig c = gate(2.0, 0.02, 0.0, 30.0);
  c.n_max = 40;
  const double t = 50.0;
  const std::vector<double> times{t};
  const auto e = simulate_ensemble(c, 4000, 21, t, times);
  const double expected = 2.0 * c.kappa * c.n_th * (c.n_th + 1.0) * t;
  EXPECT_NEAR(e.cavity_jumps.mean, expected, 3.0 * e.cavity_jumps.stderr_);
}
