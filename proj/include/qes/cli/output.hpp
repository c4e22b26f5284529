#ifndef QES_CLI_OUTPUT_HPP
#define QES_CLI_OUTPUT_HPP

// CSV tables with a units row under the header, RFC 4180 quoting, and
// deterministic number formatting shared with the JSON summaries.

#include <filesystem>
#include <string>
#include <vector>

#include "qes/ring.hpp"

namespace qes::cli {

class CsvTable {
 public:
  CsvTable() = default;
  CsvTable(std::vector<std::string> columns, std::vector<std::string> units);

  /// Row length must match the column count.
  void add_row(std::vector<std::string> cells);
  std::size_t rows() const noexcept { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> units_;
  std::vector<std::vector<std::string>> rows_;
};

/// Quotes a cell when it contains a comma, quote, CR or LF.
std::string csv_escape(const std::string& cell);

/// Shortest round-trip decimal form.
std::string format_double(double v);
/// "re+imi" / "re-imi".
std::string format_complex(cplx z);
std::string format_rational(const Rational& q);

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace qes::cli

#endif
