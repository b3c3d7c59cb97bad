#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace qfc {

/// Fixed 12-significant-digit formatting used in every data file.
std::string format_number(double x);

/// Line-oriented CSV writer. Throws std::runtime_error when the file cannot
/// be opened or a write fails.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  /// Integer-valued rows (counts), written without exponent formatting.
  void row(const std::vector<long long>& values);
  void close();

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace qfc
