#include "rydchip/cavity_model.hpp"
#include "rydchip/error.hpp"
#include "rydchip/transfer.hpp"
#include "rydchip/units.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

using namespace rydchip;
using cd = std::complex<double>;

namespace {

CavityGateConfig gate(double n_th, double gamma, double delta) {
  CavityGateConfig c;
  c.g = 1.0;
  c.kappa = 0.0;
  c.gamma = gamma;
  c.n_th = n_th;
  c.delta_c = delta;
  return c;
}

// |<01,n| exp(-i H t) |10,n>|^2 summed over P(n) renormalised on [0, n_max],
// by dense matrix exponentials.
double p01_by_expm(const CavityGateConfig& cfg, double t) {
  const PhotonDistribution d = photon_distribution(cfg.n_th, cfg.cutoff());
  double total = 0.0;
  for (int n = 0; n <= cfg.cutoff(); ++n) {
    const Eigen::MatrixXcd u = (cd(0.0, -t) * sector_hamiltonian(n, cfg)).exp();
    total += d.p[n] * std::norm(u(1, 0));
  }
  return total / (1.0 - d.truncation_mass);
}

// Closed three-level sector at n = 0 with uniform decay, for the brute-force
// scan.
struct Vacuum {
  Eigen::Vector3d w;  // v_1k v_0k
  Eigen::Vector3d lambda;
  explicit Vacuum(double delta) {
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    h(2, 2) = delta;
    h(0, 2) = h(2, 0) = h(1, 2) = h(2, 1) = 1.0;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
    lambda = es.eigenvalues();
    for (int k = 0; k < 3; ++k) w(k) = es.eigenvectors()(1, k) * es.eigenvectors()(0, k);
  }
  double p01(double t, double gamma) const {
    double re = 0.0, im = 0.0;
    for (int k = 0; k < 3; ++k) {
      re += w(k) * std::cos(lambda(k) * t);
      im -= w(k) * std::sin(lambda(k) * t);
    }
    return std::exp(-2.0 * gamma * t) * (re * re + im * im);
  }
};

}  // namespace

TEST(AnalyticTransfer, StartsInTen) {
  EXPECT_NEAR(analytic_transfer_probability(gate(0.0, 0.0, 50.0), 0.0), 0.0, 1e-15);
}

TEST(AnalyticTransfer, MatchesMatrixExponential) {
  for (double n_th : {0.0, 0.4, 2.0}) {
    const CavityGateConfig c = gate(n_th, 3e-4, 25.0);
    for (double t : {0.3, 5.0, 17.0, 39.0, 80.0}) {
      EXPECT_NEAR(analytic_transfer_probability(c, t), p01_by_expm(c, t), 1e-10) << n_th << " " << t;
    }
  }
}

TEST(AnalyticTransfer, ClosedSystemReachesTen) {
  const CavityGateConfig c = gate(0.0, 0.0, 50.0);
  const TransferPeak peak = transfer_peak(c);
  EXPECT_GE(peak.p01, 0.99);
  EXPECT_NEAR(peak.t / (units::pi * 50.0 / 2.0), 1.0, 0.05);
}

TEST(AnalyticTransfer, UniformDecayFactorises) {
  const CavityGateConfig lossy = gate(0.0, 3e-4, 50.0);
  const CavityGateConfig ideal = gate(0.0, 0.0, 50.0);
  const double t_tr = units::pi * 50.0 / 2.0;
  for (double t : {t_tr, 0.5 * t_tr, 1.7 * t_tr}) {
    EXPECT_NEAR(analytic_transfer_probability(lossy, t),
                std::exp(-2 * 3e-4 * t) * analytic_transfer_probability(ideal, t), 1e-13);
  }
}

TEST(AnalyticTransfer, CavityLossIgnored) {
  CavityGateConfig with_kappa = gate(1.0, 3e-4, 30.0);
  with_kappa.kappa = 0.05;
  EXPECT_EQ(analytic_transfer_probability(with_kappa, 20.0), analytic_transfer_probability(gate(1.0, 3e-4, 30.0), 20.0));
}

// Exchange frequency of the dark/bright doublet of one closed sector against
// the second-order rate -g^2/delta_c, with the bound (g sqrt(n+1)/delta_c)^2.
TEST(ExchangeRate, SecondOrderAccuracyBound) {
  for (double delta : {10.0, 20.0, 50.0, 100.0}) {
    for (int n : {0, 1, 5}) {
      CavityGateConfig c = gate(0.0, 0.0, delta);
      c.n_max = std::max(4, n);
      const Eigen::MatrixXcd h = sector_hamiltonian(n, c);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.real());
      Eigen::VectorXd bright = Eigen::VectorXd::Zero(h.rows());
      bright(0) = bright(1) = std::sqrt(0.5);
      int k_b = 0;
      for (int k = 0; k < h.rows(); ++k) {
        if (std::abs(es.eigenvectors().col(k).dot(bright)) > std::abs(es.eigenvectors().col(k_b).dot(bright))) k_b = k;
      }
      // The dark state (|10> - |01>)/sqrt(2) sits at zero energy.
      const double g_exact = 0.5 * es.eigenvalues()(k_b);

      // p01 of the fixed-n sector peaks after half an exchange period.
      const double t_half = units::pi / (2.0 * std::abs(g_exact));
      const Eigen::MatrixXcd u = (cd(0.0, -t_half) * h).exp();
      EXPECT_GT(std::norm(u(1, 0)), 1.0 - 8.0 * (n + 1) / (delta * delta));

      const double g2 = exchange_rate(1.0, delta, n);
      const double rel = std::abs(g2 - g_exact) / std::abs(g_exact);
      EXPECT_LE(rel, (n + 1.0) / (delta * delta)) << "delta=" << delta << " n=" << n;
    }
  }
}

TEST(OptimizeDetuning, MatchesBruteForceScanAtVacuum) {
  CavityGateConfig c = gate(0.0, 3e-4, 0.0);
  c.kappa = 1e-3;
  const DetuningOptimum opt = optimize_detuning(c);

  double best_p = 0.0, best_delta = 0.0;
  const double lo = 2.0 * std::sqrt(static_cast<double>(c.cutoff()));
  for (double delta = lo; delta <= 200.0 + 1e-9; delta += 0.5) {
    const Vacuum v(delta);
    const double t_hi = 1.2 * units::pi * delta / 2.0;
    for (double t = 0.0; t <= t_hi; t += 1e-3) {
      const double p = v.p01(t, 3e-4);
      if (p > best_p) {
        best_p = p;
        best_delta = delta;
      }
    }
  }
  EXPECT_LE(std::abs(opt.delta_c_over_g - best_delta), 0.5);
  EXPECT_GE(opt.p01_max, best_p - 1e-6);
  EXPECT_NEAR(analytic_transfer_probability([&] {
                CavityGateConfig at = c;
                at.delta_c = opt.delta_c_over_g;
                return at;
              }(),
                                            opt.t_tr),
              opt.p01_max, 1e-12);
}

TEST(OptimizeDetuning, ThermalOptimumIsInterior) {
  const DetuningOptimum a = optimize_detuning(gate(1.0, 3e-4, 0.0));
  const DetuningOptimum b = optimize_detuning(gate(3.0, 3e-4, 0.0));
  EXPECT_GT(a.delta_c_over_g, 2.0 * std::sqrt(10.0));
  EXPECT_LT(b.delta_c_over_g, 200.0);
  EXPECT_LE(a.delta_c_over_g, b.delta_c_over_g);
  for (const DetuningOptimum& o : {a, b}) {
    EXPECT_NEAR(o.t_tr / (units::pi * o.delta_c_over_g / 2.0), 1.0, 0.05);
  }
}

TEST(OptimizeDetuning, UnboundedWithoutAtomicDecay) {
  try {
    optimize_detuning(gate(1.0, 0.0, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnboundedOptimum);
  }
}
