#pragma once

// Flat key = value configuration with '#' comments and dotted namespaces
// (field.zeta, pair.rabi, gate.n_th, ...).

#include "rydchip/cavity_model.hpp"
#include "rydchip/dressed_trap.hpp"
#include "rydchip/field_model.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace rydchip::cli {

class Config {
 public:
  /// Throws Error(Config) on malformed lines or duplicate keys. `source`
  /// names the input in diagnostics.
  static Config parse(std::string_view text, const std::string& source);

  /// Reads a file, or a bundled preset when `path_or_preset` names one and
  /// no such file exists.
  static Config load(const std::string& path_or_preset);

  bool has(std::string_view key) const;
  void set(const std::string& key, const std::string& value);

  /// Typed lookups. The required forms throw Error(Config) naming the key.
  std::string text(std::string_view key) const;
  double number(std::string_view key) const;
  long long integer(std::string_view key) const;
  std::vector<double> numbers(std::string_view key) const;

  std::optional<std::string> text_if(std::string_view key) const;
  std::optional<double> number_if(std::string_view key) const;
  std::optional<long long> integer_if(std::string_view key) const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }
  const std::string& source() const { return source_; }
  /// Keys present in the input that no lookup has asked for.
  std::vector<std::string> unused_keys() const;

 private:
  const std::string* find(std::string_view key) const;
  [[noreturn]] void bad_value(std::string_view key, const std::string& value, const char* expected) const;

  std::map<std::string, std::string, std::less<>> entries_;
  mutable std::set<std::string, std::less<>> used_;
  std::string source_;
};

double parse_number(std::string_view s);
std::vector<double> parse_number_list(std::string_view s);

/// field.<name>, or the bare FieldConfig field name.
FieldConfig read_field_config(const Config& cfg);
DressingPair read_pair(const Config& cfg, std::string_view ns = "pair");
/// Gate parameters; delta_c is left at its default when the key is absent
/// or set to "auto".
CavityGateConfig read_gate_config(const Config& cfg);
bool gate_detuning_is_auto(const Config& cfg);

}  // namespace rydchip::cli
