#pragma once

// CSV output with shortest round-trip decimal formatting, independent of the
// locale.

#include <cstdint>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace rydchip::cli {

using CsvCell = std::variant<double, long long, std::uint64_t, std::string>;

/// Shortest decimal string that reads back to exactly `v`.
std::string format_number(double v);

class CsvWriter {
 public:
  /// Throws Error(Domain) when the file cannot be opened.
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  /// Throws Error(Domain) if the cell count differs from the header.
  void row(const std::vector<CsvCell>& cells);
  void close();

 private:
  std::ofstream out_;
  std::string path_;
  size_t columns_;
};

}  // namespace rydchip::cli
