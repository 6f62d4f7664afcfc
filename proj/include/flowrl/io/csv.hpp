#pragma once

#include <string>
#include <vector>

namespace flowrl::io {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column index by header name; throws ConfigError when missing.
  std::size_t column(const std::string& name) const;
  std::vector<double> column_values(const std::string& name) const;
};

/// Writes numeric CSV with full round-trip precision.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

CsvTable read_csv(const std::string& path);

}  // namespace flowrl::io
