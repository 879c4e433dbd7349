#pragma once

#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fdw {

/// Round-trip formatting: 17 significant digits.
std::string format_real(double x);

/// Comma-separated writer with a header row. Numbers are written with
/// format_real so identical inputs give byte-identical files.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> header);

  void row(std::span<const double> values);
  void row(std::initializer_list<double> values);
  void row(std::span<const std::string> cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace fdw
