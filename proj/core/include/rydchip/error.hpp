#pragma once

#include <stdexcept>
#include <string>

namespace rydchip {

enum class ErrorKind {
  Domain,          // argument outside the model's domain (below the chip, bad grid, ...)
  Singular,        // evaluation on the charged disk itself
  NoCrossing,      // required field value never reached
  CrossingBelowSurface,
  NoTrap,          // non-positive force constant
  Colocation,      // no admissible detuning for the second trap
  Regime,          // approximation requested outside its validity window
  Cutoff,          // photon cutoff too small
  UnboundedOptimum,
  OracleScope,
  Config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rydchip
