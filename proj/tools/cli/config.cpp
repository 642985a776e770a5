#include "config.hpp"

#include "presets.hpp"
#include "rydchip/error.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rydchip::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(std::string_view key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  for (char c : key) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                    c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

}  // namespace

double parse_number(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const char* end = s.data() + s.size();
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::Config, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> parse_number_list(std::string_view s) {
  std::vector<double> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_number(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

Config Config::parse(std::string_view text, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = source + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) config_error(where + ": expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!valid_key(key)) config_error(where + ": invalid key '" + std::string(key) + "'");
    if (value.empty()) config_error(where + ": empty value for '" + std::string(key) + "'");
    if (!cfg.entries_.emplace(std::string(key), std::string(value)).second) {
      config_error(where + ": duplicate key '" + std::string(key) + "'");
    }
  }
  return cfg;
}

Config Config::load(const std::string& path_or_preset) {
  std::error_code ec;
  std::ifstream in;
  if (std::filesystem::is_regular_file(path_or_preset, ec)) in.open(path_or_preset, std::ios::binary);
  if (in.is_open()) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path_or_preset);
  }
  if (const auto preset = find_preset(path_or_preset)) return parse(*preset, "preset:" + path_or_preset);
  config_error("cannot read config '" + path_or_preset + "' (not a file or a bundled preset)");
}

const std::string* Config::find(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  used_.insert(it->first);
  return &it->second;
}

bool Config::has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

void Config::set(const std::string& key, const std::string& value) { entries_[key] = value; }

void Config::bad_value(std::string_view key, const std::string& value, const char* expected) const {
  config_error(source_ + ": key '" + std::string(key) + "' expects " + expected + ", got '" + value + "'");
}

std::optional<std::string> Config::text_if(std::string_view key) const {
  if (const auto* v = find(key)) return *v;
  return std::nullopt;
}

std::optional<double> Config::number_if(std::string_view key) const {
  const auto* v = find(key);
  if (!v) return std::nullopt;
  try {
    return parse_number(*v);
  } catch (const Error&) {
    bad_value(key, *v, "a number");
  }
}

std::optional<long long> Config::integer_if(std::string_view key) const {
  const auto* v = find(key);
  if (!v) return std::nullopt;
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) bad_value(key, *v, "an integer");
  return out;
}

std::string Config::text(std::string_view key) const {
  if (auto v = text_if(key)) return *v;
  config_error(source_ + ": missing required key '" + std::string(key) + "'");
}

double Config::number(std::string_view key) const {
  if (auto v = number_if(key)) return *v;
  config_error(source_ + ": missing required key '" + std::string(key) + "'");
}

long long Config::integer(std::string_view key) const {
  if (auto v = integer_if(key)) return *v;
  config_error(source_ + ": missing required key '" + std::string(key) + "'");
}

std::vector<double> Config::numbers(std::string_view key) const {
  const std::string v = text(key);
  try {
    return parse_number_list(v);
  } catch (const Error&) {
    bad_value(key, v, "a comma-separated list of numbers");
  }
}

std::vector<std::string> Config::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) {
    if (!used_.count(k)) out.push_back(k);
  }
  return out;
}

FieldConfig read_field_config(const Config& cfg) {
  auto get = [&](const std::string& name) {
    const std::string dotted = "field." + name;
    if (cfg.has(dotted) || !cfg.has(name)) return cfg.number(dotted);
    return cfg.number(name);
  };
  FieldConfig f;
  f.disk_radius = get("disk_radius");
  f.charge_density = get("charge_density");
  f.F0 = get("F0");
  f.zeta = get("zeta");
  f.F_bias = get("F_bias");
  return f;
}

DressingPair read_pair(const Config& cfg, std::string_view ns) {
  const std::string p = std::string(ns) + ".";
  DressingPair pair;
  pair.d_main = cfg.number(p + "d_main");
  pair.d_aux = cfg.number(p + "d_aux");
  pair.detuning = cfg.number(p + "detuning");
  pair.rabi = cfg.number(p + "rabi");
  pair.omega_res = cfg.number_if(p + "omega_res");
  return pair;
}

bool gate_detuning_is_auto(const Config& cfg) {
  const auto v = cfg.text_if("gate.delta_c");
  return !v || *v == "auto";
}

CavityGateConfig read_gate_config(const Config& cfg) {
  CavityGateConfig g;
  g.g = cfg.number("gate.g");
  g.kappa = cfg.number("gate.kappa");
  g.gamma = cfg.number("gate.gamma");
  g.n_th = cfg.number_if("gate.n_th").value_or(0.0);
  if (!gate_detuning_is_auto(cfg)) g.delta_c = cfg.number("gate.delta_c");
  if (auto n = cfg.integer_if("gate.n_max")) g.n_max = static_cast<int>(*n);
  if (auto w = cfg.number_if("gate.omega_c")) g.omega_c = *w;
  const auto length = cfg.number_if("gate.length_cm");
  const auto gap = cfg.number_if("gate.gap_um");
  if (length || gap) {
    g.geometry = CavityGeometry{};
    if (length) g.geometry->length_cm = *length;
    if (gap) g.geometry->gap_um = *gap;
  }
  return g;
}

}  // namespace rydchip::cli
