#include "rydchip/cavity_model.hpp"

#include "blocks.hpp"
#include "rydchip/error.hpp"
#include "rydchip/units.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rydchip {

namespace {

constexpr double kMaxTruncationMass = 1e-3;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double tail_mass(double n_th, int n_max) {
  if (n_th == 0.0) return 0.0;
  return std::pow(n_th / (1.0 + n_th), n_max + 1);
}

int minimum_cutoff(double n_th) { return std::max(4, static_cast<int>(std::ceil(10.0 * n_th))); }

bool is_atomic(JumpChannel c) { return c != JumpChannel::CavityLoss && c != JumpChannel::CavityGain; }

}  // namespace

void CavityGateConfig::validate() const {
  if (!(g > 0.0)) throw Error(ErrorKind::Domain, "g must be > 0, got " + fmt(g));
  if (!std::isfinite(delta_c)) throw Error(ErrorKind::Domain, "delta_c must be finite");
  if (!(kappa >= 0.0)) throw Error(ErrorKind::Domain, "kappa must be >= 0");
  if (!(gamma >= 0.0)) throw Error(ErrorKind::Domain, "gamma must be >= 0");
  if (!(n_th >= 0.0) || !std::isfinite(n_th)) throw Error(ErrorKind::Domain, "n_th must be finite and >= 0");
  if (n_max && *n_max < minimum_cutoff(n_th)) {
    throw Error(ErrorKind::Domain, "n_max=" + std::to_string(*n_max) + " is below max(4, ceil(10 n_th))=" +
                                       std::to_string(minimum_cutoff(n_th)));
  }
}

int CavityGateConfig::cutoff() const { return n_max ? *n_max : default_cutoff(n_th); }

double thermal_occupation(double omega_c_ghz, double temperature_k) {
  if (!(omega_c_ghz > 0.0)) throw Error(ErrorKind::Domain, "omega_c must be > 0");
  if (!(temperature_k >= 0.0)) throw Error(ErrorKind::Domain, "temperature must be >= 0");
  if (temperature_k == 0.0) return 0.0;
  const double x = units::planck * omega_c_ghz * units::ghz / (units::boltzmann * temperature_k);
  return 1.0 / std::expm1(x);
}

PhotonDistribution photon_distribution(double n_th, int n_max) {
  if (!(n_th >= 0.0)) throw Error(ErrorKind::Domain, "n_th must be >= 0");
  if (n_max < 1) throw Error(ErrorKind::Domain, "n_max must be >= 1");
  PhotonDistribution d;
  d.p.assign(static_cast<size_t>(n_max) + 1, 0.0);
  const double q = n_th / (1.0 + n_th);
  double term = 1.0 / (1.0 + n_th);
  for (int n = 0; n <= n_max; ++n) {
    d.p[n] = term;
    term *= q;
  }
  d.truncation_mass = tail_mass(n_th, n_max);
  if (d.truncation_mass > kMaxTruncationMass) {
    throw Error(ErrorKind::Cutoff, "photon cutoff n_max=" + std::to_string(n_max) + " leaves truncation mass " +
                                       fmt(d.truncation_mass) + " > 1e-3 at n_th=" + fmt(n_th));
  }
  return d;
}

int default_cutoff(double n_th) {
  int n = minimum_cutoff(n_th);
  while (tail_mass(n_th, n) > kMaxTruncationMass) ++n;
  return n;
}

int dynamic_max_base(int n_max) { return n_max + std::max(4, n_max / 2); }

double cavity_coupling(double dipole_01, double omega_c_ghz, double length_cm, double gap_um, double z_um) {
  if (!(dipole_01 > 0.0) || !(omega_c_ghz > 0.0) || !(length_cm > 0.0) || !(gap_um > 0.0) || !(z_um >= 0.0)) {
    throw Error(ErrorKind::Domain, "cavity coupling needs positive dipole, frequency and geometry");
  }
  const double omega = units::angular(omega_c_ghz * units::ghz);
  const double gap = gap_um * units::um;
  const double volume = units::two_pi * gap * gap * length_cm * units::cm;
  const double field_per_photon = std::sqrt(units::hbar * omega / (units::epsilon0 * volume));
  const double g_angular = units::dipole_to_si(dipole_01) / units::hbar * field_per_photon * std::exp(-z_um / gap_um);
  return g_angular / units::two_pi / units::mhz;
}

double exchange_rate(double g, double delta_c, int /*n*/) {
  if (delta_c == 0.0) throw Error(ErrorKind::Domain, "exchange rate is undefined at delta_c = 0");
  return -g * g / delta_c;
}

bool exchange_regime_ok(double g, double delta_c, int n) {
  return std::abs(delta_c) >= 5.0 * g * std::sqrt(n + 1.0);
}

double exchange_transfer_time_us(double g, double delta_c) {
  return 1.0 / (4.0 * std::abs(exchange_rate(g, delta_c, 0)));
}

int sector_size(int base_n, int n_max) {
  int count = 0;
  for (int p : {base_n, base_n, base_n + 1, base_n - 1}) count += (p >= 0 && p <= n_max + 1);
  return count;
}

Eigen::MatrixXcd sector_hamiltonian(int base_n, const CavityGateConfig& cfg) {
  cfg.validate();
  const int n_max = cfg.cutoff();
  if (base_n < 0 || base_n > n_max) {
    throw Error(ErrorKind::Domain, "base_n=" + std::to_string(base_n) + " outside [0, " + std::to_string(n_max) + "]");
  }
  const detail::BlockSpace space(detail::rates_of(cfg), n_max, false);
  return space.block(space.sector_block(base_n)).h_eff;
}

SectorState apply_jump(const SectorState& state, JumpChannel channel, const CavityGateConfig& cfg) {
  cfg.validate();
  const int n_max = cfg.cutoff();
  if (state.lost) throw Error(ErrorKind::Domain, "a lost state admits no further jumps");
  if (state.base_n < 0 || state.base_n > n_max) {
    throw Error(ErrorKind::Domain, "base_n=" + std::to_string(state.base_n) + " outside [0, " +
                                       std::to_string(n_max) + "]");
  }
  if (state.amplitudes.size() != sector_size(state.base_n, n_max)) {
    throw Error(ErrorKind::Domain, "amplitude count does not match the sector size");
  }
  if (channel == JumpChannel::CavityGain && state.base_n + 1 > n_max) {
    throw Error(ErrorKind::Cutoff, "photon gain from base_n=" + std::to_string(state.base_n) +
                                       " exceeds the cutoff n_max=" + std::to_string(n_max));
  }

  const detail::BlockSpace space(detail::rates_of(cfg), n_max, false);
  const auto res = space.apply(space.sector_block(state.base_n), state.amplitudes, channel);
  if (res.overflow > 0.0) {
    throw Error(ErrorKind::Cutoff, "photon gain leaves the represented photon range; increase n_max");
  }
  const double norm = res.block < 0 ? 0.0 : res.psi.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::Domain, "jump operator annihilates the state");

  SectorState out;
  out.time = state.time;
  if (is_atomic(channel)) {
    out.base_n = state.base_n;
    out.lost = true;
    return out;
  }
  out.base_n = space.block(res.block).excitation - 1;
  out.amplitudes = res.psi / norm;
  return out;
}

}  // namespace rydchip
