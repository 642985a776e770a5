#pragma once

// Block decomposition of {0, 1, l}^2 x {0..max_base+1}. A block collects
// the states with the same set of lost atoms and the same excitation number
// (photons plus atoms in |1>); the effective Hamiltonian never leaves a
// block, and every jump maps a block onto a single other block.
//
// The photon ceiling sits one above max_base so that every two-atom sector
// with base photon number <= max_base is complete. Sectors above max_base
// are not built; a gain jump that would reach one (or pass the ceiling) is
// reported as overflow.

#include "rydchip/cavity_model.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace rydchip::detail {

inline constexpr int kLevel0 = 0;
inline constexpr int kLevel1 = 1;
inline constexpr int kLost = 2;

struct Slot {
  int a1 = 0;
  int a2 = 0;
  int p = 0;
};

struct Block {
  int mask = 0;        // bit 0: atom 1 lost, bit 1: atom 2 lost
  int excitation = 0;  // photons + atoms in |1>
  std::vector<Slot> slots;
  Eigen::MatrixXcd h_eff;  // units of g

  // h_eff = V diag(lambda) V^-1, or exp() fallback when V is ill-conditioned.
  Eigen::VectorXcd lambda;
  Eigen::MatrixXcd v;
  Eigen::MatrixXcd v_inv;
  bool diagonalised = false;

  /// Coefficients of psi in the eigenbasis (or psi itself for the fallback).
  Eigen::VectorXcd to_modes(const Eigen::VectorXcd& psi) const;
  /// State reached after time t from the given mode coefficients.
  Eigen::VectorXcd evolve(const Eigen::VectorXcd& modes, double t) const;
};

struct Rates {
  double delta = 0.0;  // delta_c / g
  double kappa = 0.0;
  double gamma = 0.0;
  double n_th = 0.0;
};

Rates rates_of(const CavityGateConfig& cfg);

class BlockSpace {
 public:
  BlockSpace(const Rates& rates, int max_base, bool diagonalise);

  int max_base() const { return max_base_; }
  int ceiling() const { return max_base_ + 1; }
  const Rates& rates() const { return rates_; }
  const Block& block(int id) const { return blocks_[id]; }

  /// Block id and slot position of a basis state, or -1 when absent.
  int block_of(const Slot& s) const;
  int position_of(const Slot& s) const;

  /// Block holding the two-atom sector with base photon number base_n
  /// (excitation base_n + 1), or -1 if it has no slots.
  int sector_block(int base_n) const;

  struct JumpResult {
    int block = -1;
    Eigen::VectorXcd psi;   // unnormalised L psi
    double overflow = 0.0;  // |L psi|^2 that leaves the represented space
    double weight() const { return overflow + (block < 0 ? 0.0 : psi.squaredNorm()); }
  };
  /// L psi for the jump operator of `channel` acting on block `id`.
  JumpResult apply(int id, const Eigen::VectorXcd& psi, JumpChannel channel) const;

  static constexpr std::array<JumpChannel, 6> kChannels = {
      JumpChannel::DecayAtom1From1, JumpChannel::DecayAtom1From0, JumpChannel::DecayAtom2From1,
      JumpChannel::DecayAtom2From0, JumpChannel::CavityLoss,      JumpChannel::CavityGain};

 private:
  int key(const Slot& s) const { return (s.a1 * 3 + s.a2) * (ceiling() + 1) + s.p; }
  void add_block(int mask, int excitation, std::vector<Slot> slots, bool diagonalise);

  Rates rates_;
  int max_base_;
  std::vector<Block> blocks_;
  std::vector<int> block_of_;
  std::vector<int> position_of_;
  std::vector<int> sector_block_;  // indexed by base_n + 1, base_n in [-1, max_base]
};

}  // namespace rydchip::detail
