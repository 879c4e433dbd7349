#include "fdw/csv.hpp"

#include <cstdio>

#include "fdw/error.hpp"

namespace fdw {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> header)
    : out_(path), columns_(header.size()) {
  FDW_REQUIRE(out_.good(), IoError, "cannot open '" + path + "' for writing");
  row(std::span<const std::string>(header));
}

void CsvWriter::row(std::span<const double> values) {
  FDW_REQUIRE(values.size() == columns_, IoError, "CSV row has the wrong number of columns");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_real(values[i]);
  }
  out_ << '\n';
  FDW_REQUIRE(out_.good(), IoError, "CSV write failed");
}

void CsvWriter::row(std::initializer_list<double> values) {
  row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::row(std::span<const std::string> cells) {
  FDW_REQUIRE(cells.size() == columns_, IoError, "CSV row has the wrong number of columns");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  FDW_REQUIRE(out_.good(), IoError, "CSV write failed");
}

}  // namespace fdw
