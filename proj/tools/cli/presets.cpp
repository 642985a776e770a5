#include "presets.hpp"

#include <algorithm>
#include <utility>

namespace rydchip::cli {

namespace {
#include "presets_data.inc"  // kPresets: {name, text} pairs, generated at configure time
}  // namespace

std::optional<std::string_view> find_preset(std::string_view name) {
  const auto it = std::find_if(std::begin(kPresets), std::end(kPresets),
                               [&](const auto& p) { return p.first == name; });
  if (it == std::end(kPresets)) return std::nullopt;
  return it->second;
}

std::vector<std::string_view> preset_names() {
  std::vector<std::string_view> out;
  for (const auto& p : kPresets) out.push_back(p.first);
  return out;
}

}  // namespace rydchip::cli
