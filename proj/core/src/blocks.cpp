#include "blocks.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <optional>

namespace rydchip::detail {

namespace {

using cd = std::complex<double>;

double level_energy(int a, double delta) {
  if (a == kLevel0) return 0.5 * delta;
  if (a == kLevel1) return -0.5 * delta;
  return 0.0;
}

// Image of a basis state under a jump operator, with its amplitude factor.
// Photon numbers are not capped here; the caller decides what lies outside.
std::optional<std::pair<Slot, double>> jump_image(const Slot& s, JumpChannel ch, const Rates& r) {
  Slot t = s;
  switch (ch) {
    case JumpChannel::DecayAtom1From1:
    case JumpChannel::DecayAtom1From0:
      if (s.a1 != (ch == JumpChannel::DecayAtom1From1 ? kLevel1 : kLevel0) || r.gamma == 0.0) return std::nullopt;
      t.a1 = kLost;
      return std::pair{t, std::sqrt(r.gamma)};
    case JumpChannel::DecayAtom2From1:
    case JumpChannel::DecayAtom2From0:
      if (s.a2 != (ch == JumpChannel::DecayAtom2From1 ? kLevel1 : kLevel0) || r.gamma == 0.0) return std::nullopt;
      t.a2 = kLost;
      return std::pair{t, std::sqrt(r.gamma)};
    case JumpChannel::CavityLoss:
      if (s.p == 0 || r.kappa == 0.0) return std::nullopt;
      t.p = s.p - 1;
      return std::pair{t, std::sqrt(r.kappa * (r.n_th + 1.0) * s.p)};
    case JumpChannel::CavityGain:
      if (r.kappa == 0.0 || r.n_th == 0.0) return std::nullopt;
      t.p = s.p + 1;
      return std::pair{t, std::sqrt(r.kappa * r.n_th * (s.p + 1))};
  }
  return std::nullopt;
}

}  // namespace

Rates rates_of(const CavityGateConfig& cfg) {
  return {cfg.delta_c / cfg.g, cfg.kappa, cfg.gamma, cfg.n_th};
}

Eigen::VectorXcd Block::to_modes(const Eigen::VectorXcd& psi) const {
  return diagonalised ? Eigen::VectorXcd(v_inv * psi) : psi;
}

Eigen::VectorXcd Block::evolve(const Eigen::VectorXcd& modes, double t) const {
  if (diagonalised) {
    const Eigen::VectorXcd phases = (lambda * cd(0.0, -t)).array().exp();
    return v * phases.cwiseProduct(modes);
  }
  const Eigen::MatrixXcd u = (h_eff * cd(0.0, -t)).exp();
  return u * modes;
}

BlockSpace::BlockSpace(const Rates& rates, int max_base, bool diagonalise) : rates_(rates), max_base_(max_base) {
  const int top = ceiling();
  block_of_.assign(static_cast<size_t>(9) * (top + 1), -1);
  position_of_.assign(block_of_.size(), -1);
  sector_block_.assign(static_cast<size_t>(max_base) + 2, -1);

  auto keep = [&](std::initializer_list<Slot> candidates) {
    std::vector<Slot> out;
    for (const Slot& s : candidates) {
      if (s.p >= 0 && s.p <= top) out.push_back(s);
    }
    return out;
  };

  for (int N = 0; N <= max_base + 1; ++N) {
    sector_block_[N] = static_cast<int>(blocks_.size());
    add_block(0, N, keep({{1, 0, N - 1}, {0, 1, N - 1}, {0, 0, N}, {1, 1, N - 2}}), diagonalise);
  }
  for (int N = 0; N <= top + 1; ++N) {
    auto one = keep({{kLost, 1, N - 1}, {kLost, 0, N}});
    if (!one.empty()) add_block(1, N, std::move(one), diagonalise);
    auto two = keep({{1, kLost, N - 1}, {0, kLost, N}});
    if (!two.empty()) add_block(2, N, std::move(two), diagonalise);
  }
  for (int N = 0; N <= top; ++N) add_block(3, N, {{kLost, kLost, N}}, diagonalise);
}

void BlockSpace::add_block(int mask, int excitation, std::vector<Slot> slots, bool diagonalise) {
  const int id = static_cast<int>(blocks_.size());
  Block b;
  b.mask = mask;
  b.excitation = excitation;
  b.slots = std::move(slots);
  const int d = static_cast<int>(b.slots.size());
  for (int i = 0; i < d; ++i) {
    block_of_[key(b.slots[i])] = id;
    position_of_[key(b.slots[i])] = i;
  }

  const Rates& r = rates_;
  b.h_eff = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const Slot& s = b.slots[i];
    const int present = (s.a1 != kLost) + (s.a2 != kLost);
    const double decay = r.gamma * present + r.kappa * (r.n_th + 1.0) * s.p + r.kappa * r.n_th * (s.p + 1);
    b.h_eff(i, i) = cd(level_energy(s.a1, r.delta) + level_energy(s.a2, r.delta), -0.5 * decay);

    // g (c^dag sigma_- + c sigma_+) with g = 1: |1, p> <-> |0, p+1>.
    for (int atom = 0; atom < 2; ++atom) {
      const int a = atom == 0 ? s.a1 : s.a2;
      if (a != kLevel1) continue;
      Slot t = s;
      (atom == 0 ? t.a1 : t.a2) = kLevel0;
      t.p = s.p + 1;
      if (t.p > ceiling()) continue;
      const int j = position_of_[key(t)];
      if (j < 0 || block_of_[key(t)] != id) continue;
      b.h_eff(i, j) = b.h_eff(j, i) = std::sqrt(static_cast<double>(t.p));
    }
  }

  if (diagonalise) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(b.h_eff);
    if (es.info() == Eigen::Success) {
      const Eigen::MatrixXcd v = es.eigenvectors();
      const Eigen::MatrixXcd v_inv = v.inverse();
      const Eigen::MatrixXcd rebuilt = v * es.eigenvalues().asDiagonal() * v_inv;
      const double scale = 1.0 + b.h_eff.norm();
      const double cond = v.norm() * v_inv.norm();
      if (v_inv.allFinite() && cond < 1e8 && (rebuilt - b.h_eff).norm() <= 1e-11 * scale) {
        b.lambda = es.eigenvalues();
        b.v = v;
        b.v_inv = v_inv;
        b.diagonalised = true;
      }
    }
  }
  blocks_.push_back(std::move(b));
}

int BlockSpace::block_of(const Slot& s) const {
  if (s.p < 0 || s.p > ceiling()) return -1;
  return block_of_[key(s)];
}

int BlockSpace::position_of(const Slot& s) const {
  if (s.p < 0 || s.p > ceiling()) return -1;
  return position_of_[key(s)];
}

int BlockSpace::sector_block(int base_n) const {
  if (base_n < -1 || base_n > max_base_) return -1;
  return sector_block_[base_n + 1];
}

BlockSpace::JumpResult BlockSpace::apply(int id, const Eigen::VectorXcd& psi, JumpChannel channel) const {
  const Block& b = blocks_[id];
  JumpResult out;
  for (int i = 0; i < static_cast<int>(b.slots.size()); ++i) {
    const auto image = jump_image(b.slots[i], channel, rates_);
    if (!image) continue;
    const int target = block_of(image->first);
    const cd amp = image->second * psi[i];
    // Gain out of the last two-atom sector, or past the photon ceiling.
    if (target < 0) {
      out.overflow += std::norm(amp);
      continue;
    }
    if (out.block < 0) {
      out.block = target;
      out.psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(blocks_[target].slots.size()));
    }
    out.psi[position_of(image->first)] += amp;
  }
  return out;
}

}  // namespace rydchip::detail
