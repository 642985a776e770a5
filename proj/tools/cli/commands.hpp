#pragma once

#include "rydchip/error.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace rydchip::cli {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kConfig = 2;
inline constexpr int kDomain = 3;
inline constexpr int kNoTrap = 4;
inline constexpr int kCutoff = 5;
inline constexpr int kOptimizer = 6;
}  // namespace exit_code

int exit_code_for(ErrorKind kind);

/// Flags shared by the subcommands; unset values fall back to the config.
struct RunOptions {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> trajectories;
  bool oracle = false;
  std::optional<std::string> model;      // disk | exponential
  std::optional<std::string> scan_bias;  // lo:hi:n
  std::optional<std::string> nth_list;   // a,b,c
  std::optional<double> bias;            // overrides field.F_bias
};

int cmd_field(const RunOptions& opt);
int cmd_trap(const RunOptions& opt);
/// sub: dynamics | detuning-sweep | fidelity-sweep
int cmd_gate(const std::string& sub, const RunOptions& opt);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, char** argv);

}  // namespace rydchip::cli
