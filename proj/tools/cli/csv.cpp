#include "csv.hpp"

#include "rydchip/error.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace rydchip::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

struct CellFormatter {
  std::string operator()(double v) const { return format_number(v); }
  std::string operator()(long long v) const { return std::to_string(v); }
  std::string operator()(std::uint64_t v) const { return std::to_string(v); }
  std::string operator()(const std::string& s) const { return s; }
};

}  // namespace

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), columns_(header.size()) {
  if (!out_) throw Error(ErrorKind::Domain, "cannot open '" + path + "' for writing");
  for (size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (cells.size() != columns_) {
    throw Error(ErrorKind::Domain, path_ + ": row has " + std::to_string(cells.size()) + " cells, header has " +
                                       std::to_string(columns_));
  }
  for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << std::visit(CellFormatter{}, cells[i]);
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw Error(ErrorKind::Domain, "failed writing '" + path_ + "'");
}

}  // namespace rydchip::cli
