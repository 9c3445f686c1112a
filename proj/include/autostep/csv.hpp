#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace autostep {

// Shortest round-trip decimal representation (std::to_chars).
std::string fmt_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;  // rows = records
  std::vector<std::vector<std::string>> cells;  // raw text (mixed reads only)

  int column(const std::string& name) const;  // -1 when absent
};

// Reads a numeric CSV with one header row; lines starting with '#' are
// skipped.  Non-numeric cells are an error.
CsvTable read_csv(const std::string& path);

// As read_csv, but keeps raw cell text and stores NaN for non-numeric cells.
CsvTable read_csv_mixed(const std::string& path);

class CsvWriter {
 public:
  // `comment` is written verbatim as a first line prefixed with "# ".
  CsvWriter(const std::string& path, const std::string& comment,
            const std::vector<std::string>& header);

  void row(std::span<const std::string> cells);
  void row(std::span<const double> cells);

 private:
  std::ofstream out_;
  std::size_t width_;
};

}  // namespace autostep
