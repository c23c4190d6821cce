#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace dryctl {

/// Shortest round-trippable text: 17 significant digits.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Comma-separated, LF line endings, header row first.
class CsvWriter {
public:
  CsvWriter(const std::string& path, std::initializer_list<const char*> header);

  void row(std::initializer_list<double> values);
  void row(std::span<const double> values);
  void close();

private:
  std::ofstream out_;
  std::string path_;
  std::size_t columns_ = 0;
};

/// Writes columns of equal length as one CSV file.
void write_columns(const std::string& path, std::initializer_list<const char*> header,
                   std::initializer_list<std::span<const double>> columns);

} // namespace dryctl
