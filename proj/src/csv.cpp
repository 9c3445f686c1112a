#include "autostep/csv.hpp"

#include <charconv>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace autostep {

std::string fmt_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("to_chars failed");
  return std::string(buf, ptr);
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

namespace {

CsvTable read_csv_impl(const std::string& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path);

  CsvTable table;
  std::string line;
  std::vector<std::vector<double>> rows;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!have_header) {
      table.header = split_line(line);
      have_header = true;
      continue;
    }
    auto cells = split_line(line);
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc{} || ptr != c.data() + c.size()) {
        if (strict)
          throw std::runtime_error("non-numeric CSV cell '" + c + "' in " + path);
        v = std::numeric_limits<double>::quiet_NaN();
      }
      row.push_back(v);
    }
    if (row.size() != table.header.size())
      throw std::runtime_error("ragged CSV row in " + path);
    rows.push_back(std::move(row));
    if (!strict) table.cells.push_back(std::move(cells));
  }
  if (!have_header) throw std::runtime_error("empty CSV file: " + path);

  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(table.header.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return table;
}

}  // namespace

CsvTable read_csv(const std::string& path) { return read_csv_impl(path, true); }

CsvTable read_csv_mixed(const std::string& path) { return read_csv_impl(path, false); }

CsvWriter::CsvWriter(const std::string& path, const std::string& comment,
                     const std::vector<std::string>& header)
    : out_(path), width_(header.size()) {
  if (!out_) throw std::runtime_error("cannot open output file: " + path);
  if (!comment.empty()) out_ << "# " << comment << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    out_ << header[i] << (i + 1 == header.size() ? "\n" : ",");
}

void CsvWriter::row(std::span<const std::string> cells) {
  if (cells.size() != width_) throw std::logic_error("CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << cells[i] << (i + 1 == cells.size() ? "\n" : ",");
}

void CsvWriter::row(std::span<const double> cells) {
  if (cells.size() != width_) throw std::logic_error("CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << fmt_double(cells[i]) << (i + 1 == cells.size() ? "\n" : ",");
}

}  // namespace autostep
