#pragma once

// Configurations bundled into the binary from configs/*.cfg.

#include <optional>
#include <string_view>
#include <vector>

namespace rydchip::cli {

std::optional<std::string_view> find_preset(std::string_view name);
std::vector<std::string_view> preset_names();

}  // namespace rydchip::cli
