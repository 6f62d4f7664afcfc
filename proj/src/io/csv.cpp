#include "flowrl/io/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "flowrl/errors.hpp"

namespace flowrl::io {

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == name) return c;
  throw ConfigError("csv: no column named '" + name + "'");
}

std::vector<double> CsvTable::column_values(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[c]);
  return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("csv: cannot write " + path);
  for (std::size_t c = 0; c < header.size(); ++c)
    out << header[c] << (c + 1 < header.size() ? ',' : '\n');
  char buf[40];
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[c]);
      out << buf << (c + 1 < row.size() ? ',' : '\n');
    }
  }
  if (!out) throw ConfigError("csv: write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("csv: cannot open " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv: empty file " + path);
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) table.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("csv: non-numeric cell '" + cell + "' in " + path);
      }
    }
    if (row.size() != table.header.size())
      throw ConfigError("csv: ragged row in " + path);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace flowrl::io
