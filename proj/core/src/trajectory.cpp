#include "rydchip/trajectory.hpp"

#include "blocks.hpp"
#include "rydchip/error.hpp"
#include "rydchip/parallel.hpp"
#include "rydchip/random.hpp"
#include "rydchip/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace rydchip {

namespace {

using detail::Block;
using detail::BlockSpace;
using detail::Slot;

constexpr double kNormTol = 1e-9;

struct Prepared {
  Prepared(const CavityGateConfig& cfg)
      : n_max(cfg.cutoff()),
        space(detail::rates_of(cfg), dynamic_max_base(n_max), true),
        dist(photon_distribution(cfg.n_th, n_max)),
        sign(bell_phase_sign(cfg)) {
    cdf.resize(dist.p.size());
    std::partial_sum(dist.p.begin(), dist.p.end(), cdf.begin());
    const double total = cdf.back();
    for (double& c : cdf) c /= total;
    cdf.back() = 1.0;
  }

  int n_max;
  BlockSpace space;
  PhotonDistribution dist;
  double sign;
  std::vector<double> cdf;
};

void check_times(double t_end, std::span<const double> times) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw Error(ErrorKind::Domain, "t_end must be finite and > 0");
  for (size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || times[i] > t_end) {
      throw Error(ErrorKind::Domain, "sample times must lie in [0, t_end]");
    }
    if (i > 0 && times[i] < times[i - 1]) throw Error(ErrorKind::Domain, "sample times must be sorted");
  }
}

void record_sample(const Prepared& prep, const Block& b, const Eigen::VectorXcd& phi, TrajectoryRecord& rec,
                   size_t k) {
  auto& pops = rec.populations[k];
  pops = {0.0, 0.0, 0.0, 0.0};
  rec.bell_fidelity[k] = 0.0;
  if (b.mask != 0) return;
  const double norm2 = phi.squaredNorm();
  std::complex<double> a10 = 0.0, a01 = 0.0;
  for (size_t i = 0; i < b.slots.size(); ++i) {
    const Slot& s = b.slots[i];
    pops[s.a1 * 2 + s.a2] += std::norm(phi[i]) / norm2;
    if (s.a1 == 1 && s.a2 == 0) a10 = phi[i];
    if (s.a1 == 0 && s.a2 == 1) a01 = phi[i];
  }
  // The basis order (a1 a2) = 00, 01, 10, 11 matches the population order.
  const std::complex<double> overlap = (a10 + std::complex<double>(0.0, prep.sign) * a01) / std::sqrt(2.0);
  rec.bell_fidelity[k] = std::norm(overlap) / norm2;
}

TrajectoryRecord run_prepared(const Prepared& prep, std::uint64_t seed, std::uint64_t index, double t_end,
                              std::span<const double> times, const TrajectoryOptions& options) {
  const BlockSpace& space = prep.space;
  CounterRng rng(seed, index);
  TrajectoryRecord rec;
  rec.populations.resize(times.size());
  rec.bell_fidelity.resize(times.size());

  const double u0 = rng.uniform();
  const int n0 = static_cast<int>(std::lower_bound(prep.cdf.begin(), prep.cdf.end(), u0) - prep.cdf.begin());
  rec.initial_photons = n0;

  int id = space.sector_block(n0);
  const Slot start = options.start_in_01 ? Slot{0, 1, n0} : Slot{1, 0, n0};
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.block(id).slots.size()));
  psi[space.position_of(start)] = 1.0;

  Eigen::VectorXcd modes = space.block(id).to_modes(psi);
  double anchor = 0.0;  // time at which `modes` was taken
  double t = 0.0;
  double r = rng.uniform();
  size_t k = 0;

  while (true) {
    const Block& b = space.block(id);
    const bool is_sample = k < times.size();
    const double stop = is_sample ? times[k] : t_end;
    Eigen::VectorXcd phi = b.evolve(modes, stop - anchor);
    if (phi.squaredNorm() > r) {
      t = stop;
      if (!is_sample) break;
      record_sample(prep, b, phi, rec, k++);
      continue;
    }

    // The squared norm decreases monotonically between jumps; bisect for
    // the time at which it meets r.
    double lo = t, hi = stop;
    double tau = hi;
    for (int it = 0; it < 200; ++it) {
      tau = 0.5 * (lo + hi);
      phi = b.evolve(modes, tau - anchor);
      const double n2 = phi.squaredNorm();
      if (std::abs(n2 - r) <= kNormTol * r || hi - lo <= 1e-15 * std::max(1.0, hi)) break;
      (n2 > r ? lo : hi) = tau;
    }

    std::array<BlockSpace::JumpResult, BlockSpace::kChannels.size()> results;
    std::array<double, BlockSpace::kChannels.size()> weights{};
    double total = 0.0;
    for (size_t c = 0; c < results.size(); ++c) {
      results[c] = space.apply(id, phi, BlockSpace::kChannels[c]);
      weights[c] = results[c].weight();
      total += weights[c];
    }
    if (!(total > 0.0)) throw Error(ErrorKind::Domain, "norm decayed without an active jump channel");

    const double pick = rng.uniform() * total;
    size_t c = results.size();
    double acc = 0.0;
    for (size_t j = 0; j < results.size(); ++j) {
      if (weights[j] == 0.0) continue;
      c = j;
      acc += weights[j];
      if (pick < acc) break;
    }
    const JumpChannel channel = BlockSpace::kChannels[c];
    if (results[c].overflow > 0.0) {
      throw Error(ErrorKind::Cutoff, "photon gain beyond base photon number " +
                                         std::to_string(space.max_base()) + "; increase n_max");
    }
    if (channel == JumpChannel::CavityGain || channel == JumpChannel::CavityLoss) {
      ++rec.cavity_jumps;
    } else {
      ++rec.atomic_losses;
    }

    id = results[c].block;
    psi = results[c].psi / results[c].psi.norm();
    modes = space.block(id).to_modes(psi);
    anchor = tau;
    t = tau;
    r = rng.uniform();
  }
  return rec;
}

MeanWithError reduce(const std::vector<double>& v) {
  MeanWithError out;
  const double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  out.mean = sum / n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

}  // namespace

double bell_phase_sign(const CavityGateConfig& cfg) { return cfg.delta_c < 0.0 ? 1.0 : -1.0; }

TrajectoryRecord run_trajectory(const CavityGateConfig& cfg, std::uint64_t seed, std::uint64_t index,
                                double t_end, std::span<const double> sample_times,
                                const TrajectoryOptions& options) {
  cfg.validate();
  check_times(t_end, sample_times);
  const Prepared prep(cfg);
  return run_prepared(prep, seed, index, t_end, sample_times, options);
}

TrajectoryEnsembleResult simulate_ensemble(const CavityGateConfig& cfg, int M, std::uint64_t seed, double t_end,
                                           std::span<const double> sample_times,
                                           const TrajectoryOptions& options) {
  cfg.validate();
  if (M < 1) throw Error(ErrorKind::Domain, "ensemble needs M >= 1");
  check_times(t_end, sample_times);
  const Prepared prep(cfg);

  std::vector<TrajectoryRecord> records(static_cast<size_t>(M));
  parallel_for(records.size(), [&](size_t m) {
    records[m] = run_prepared(prep, seed, m, t_end, sample_times, options);
  });

  TrajectoryEnsembleResult out;
  out.times.assign(sample_times.begin(), sample_times.end());
  out.M = M;
  out.seed = seed;
  out.n_max = prep.n_max;
  out.truncation_mass = prep.dist.truncation_mass;

  std::vector<double> column(records.size());
  auto reduce_by = [&](auto&& get) {
    for (size_t m = 0; m < records.size(); ++m) column[m] = get(records[m]);
    return reduce(column);
  };
  for (size_t k = 0; k < sample_times.size(); ++k) {
    for (int j = 0; j < 4; ++j) {
      out.p[j].push_back(reduce_by([&](const TrajectoryRecord& r) { return r.populations[k][j]; }));
    }
    out.p_tot.push_back(reduce_by([&](const TrajectoryRecord& r) {
      const auto& p = r.populations[k];
      return p[0] + p[1] + p[2] + p[3];
    }));
    out.fidelity.push_back(reduce_by([&](const TrajectoryRecord& r) { return r.bell_fidelity[k]; }));
  }
  out.cavity_jumps = reduce_by([](const TrajectoryRecord& r) { return double(r.cavity_jumps); });
  out.atomic_losses = reduce_by([](const TrajectoryRecord& r) { return double(r.atomic_losses); });
  return out;
}

MeanWithError bell_fidelity_at(const CavityGateConfig& cfg, int M, std::uint64_t seed, double t) {
  const double times[] = {t};
  return simulate_ensemble(cfg, M, seed, t, times).fidelity.front();
}

MeanWithError bell_fidelity(const CavityGateConfig& cfg, int M, std::uint64_t seed) {
  return bell_fidelity_at(cfg, M, seed, 0.5 * transfer_peak(cfg).t);
}

}  // namespace rydchip
