#include "qes/cli/output.hpp"

#include <fmt/format.h>

#include <fstream>

#include "qes/errors.hpp"

namespace qes::cli {

CsvTable::CsvTable(std::vector<std::string> columns, std::vector<std::string> units)
    : columns_(std::move(columns)), units_(std::move(units)) {
  if (units_.size() != columns_.size()) fail(ErrorKind::AssumptionViolated, "units row must match the columns");
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) fail(ErrorKind::AssumptionViolated, "row length must match the columns");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(cells[i]);
    }
    out += "\r\n";
  };
  line(columns_);
  line(units_);
  for (const auto& r : rows_) line(r);
  return out;
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double v) { return fmt::format("{}", v); }

std::string format_complex(cplx z) {
  const std::string im = fmt::format("{}", z.imag());
  const bool signed_im = !im.empty() && (im[0] == '-' || im[0] == '+');
  return fmt::format("{}{}{}i", z.real(), signed_im ? "" : "+", im);
}

std::string format_rational(const Rational& q) { return to_string(q); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::ComputationFailed, "cannot write " + path.string());
  out << content;
  if (!out) fail(ErrorKind::ComputationFailed, "write failed for " + path.string());
}

}  // namespace qes::cli
