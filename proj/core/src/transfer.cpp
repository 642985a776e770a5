#include "rydchip/transfer.hpp"

#include "rydchip/error.hpp"
#include "rydchip/minimize.hpp"
#include "rydchip/units.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <numeric>

namespace rydchip {

namespace {

constexpr double kDeltaMax = 200.0;
constexpr double kDeltaStep = 0.5;

}  // namespace

AnalyticTransfer::AnalyticTransfer(const CavityGateConfig& cfg) : gamma_(cfg.gamma) {
  cfg.validate();
  const int n_max = cfg.cutoff();
  dist_ = photon_distribution(cfg.n_th, n_max);
  const double total = std::accumulate(dist_.p.begin(), dist_.p.end(), 0.0);

  CavityGateConfig closed = cfg;
  closed.kappa = 0.0;
  closed.gamma = 0.0;
  closed.n_max = n_max;
  for (int n = 0; n <= n_max; ++n) {
    if (dist_.p[n] == 0.0) continue;
    const Eigen::MatrixXd h = sector_hamiltonian(n, closed).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    sectors_.push_back({dist_.p[n] / total, es.eigenvalues(), es.eigenvectors().row(0).transpose(),
                        es.eigenvectors().row(1).transpose()});
  }
}

double AnalyticTransfer::p01(double t) const {
  double sum = 0.0;
  for (const auto& s : sectors_) {
    std::complex<double> amp = 0.0;
    for (Eigen::Index k = 0; k < s.energies.size(); ++k) {
      amp += s.target[k] * std::conj(s.start[k]) * std::polar(1.0, -s.energies[k] * t);
    }
    sum += s.weight * std::norm(amp);
  }
  // With kappa = 0 the decay part is -i gamma times the identity.
  return sum * std::exp(-2.0 * gamma_ * t);
}

double analytic_transfer_probability(const CavityGateConfig& cfg, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::Domain, "time must be >= 0");
  return AnalyticTransfer(cfg).p01(t);
}

TransferPeak transfer_peak(const AnalyticTransfer& model, double delta_over_g) {
  const double d = std::abs(delta_over_g);
  if (!(d > 0.0)) throw Error(ErrorKind::Domain, "transfer peak needs delta_c != 0");
  const double t_hi = 1.2 * units::pi * d / 2.0;

  // The slow exchange envelope carries a small ripple at the detuning
  // frequency; locate the envelope first, then resolve the ripple.
  constexpr int kCoarse = 200;
  double best_t = 0.0, best_p = -1.0;
  for (int i = 1; i <= kCoarse; ++i) {
    const double t = t_hi * i / kCoarse;
    const double p = model.p01(t);
    if (p > best_p) {
      best_p = p;
      best_t = t;
    }
  }
  const double period = 2.0 * units::pi / d;
  const double step = period / 16.0;
  const double half_window = t_hi / kCoarse;
  const double lo = std::max(0.0, best_t - half_window);
  const double hi = std::min(t_hi, best_t + half_window);
  for (double t = lo; t <= hi; t += step) {
    const double p = model.p01(t);
    if (p > best_p) {
      best_p = p;
      best_t = t;
    }
  }
  const Minimum m = golden_section_maximize([&](double t) { return model.p01(t); }, std::max(0.0, best_t - step),
                                            std::min(t_hi, best_t + step), 1e-9 * (1.0 + best_t));
  if (m.value > best_p) return {m.x, m.value};
  return {best_t, best_p};
}

TransferPeak transfer_peak(const CavityGateConfig& cfg) {
  return transfer_peak(AnalyticTransfer(cfg), cfg.detuning_over_g());
}

DetuningOptimum optimize_detuning(const CavityGateConfig& cfg) {
  cfg.validate();
  if (cfg.gamma == 0.0 && cfg.n_th > 0.0) {
    throw Error(ErrorKind::UnboundedOptimum,
                "with gamma = 0 the transfer probability keeps improving as delta_c grows, so no finite "
                "optimum exists; set gamma > 0");
  }
  const int n_max = cfg.cutoff();
  CavityGateConfig work = cfg;
  work.n_max = n_max;

  auto peak_at = [&](double delta_over_g) {
    work.delta_c = delta_over_g * cfg.g;
    return transfer_peak(AnalyticTransfer(work), delta_over_g);
  };

  const double lo = 2.0 * std::sqrt(static_cast<double>(n_max));
  if (lo >= kDeltaMax) throw Error(ErrorKind::Domain, "n_max too large for the detuning search range");
  double best_delta = lo;
  double best_p = -1.0;
  for (double d = lo; d <= kDeltaMax + 1e-12; d += kDeltaStep) {
    const double p = peak_at(d).p01;
    if (p > best_p) {
      best_p = p;
      best_delta = d;
    }
  }
  const Minimum m = golden_section_maximize([&](double d) { return peak_at(d).p01; },
                                            std::max(lo, best_delta - kDeltaStep),
                                            std::min(kDeltaMax, best_delta + kDeltaStep), 1e-4);
  if (m.value > best_p) best_delta = m.x;

  const TransferPeak peak = peak_at(best_delta);
  DetuningOptimum out;
  out.delta_c_over_g = best_delta;
  out.t_tr = peak.t;
  out.p01_max = peak.p01;
  out.n_max = n_max;
  out.truncation_mass = AnalyticTransfer(work).distribution().truncation_mass;
  return out;
}

}  // namespace rydchip
