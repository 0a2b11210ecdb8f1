#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "hyperwave/error.hpp"

namespace hyperwave {

/// Full-precision number formatting shared by every CSV and report writer.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::initializer_list<std::string> header)
      : CsvWriter(path, std::vector<std::string>(header)) {}

  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    require(static_cast<bool>(out_), ErrorCode::IO, "cannot open " + path + " for writing");
    columns_ = header.size();
    write_fields(header);
  }

  void row(const std::vector<double>& values) {
    require(values.size() == columns_, ErrorCode::IO, "csv row has the wrong number of columns");
    std::vector<std::string> f;
    f.reserve(values.size());
    for (double v : values) f.push_back(format_double(v));
    write_fields(f);
  }

  /// Row whose first column is text.
  void row(const std::string& label, const std::vector<double>& values) {
    require(values.size() + 1 == columns_, ErrorCode::IO, "csv row has the wrong number of columns");
    require(label.find_first_of(",\n\"") == std::string::npos, ErrorCode::IO, "csv label needs quoting: " + label);
    std::vector<std::string> f{label};
    for (double v : values) f.push_back(format_double(v));
    write_fields(f);
  }

 private:
  void write_fields(const std::vector<std::string>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) out_ << (i ? "," : "") << f[i];
    out_ << '\n';
    require(static_cast<bool>(out_), ErrorCode::IO, "write failed");
  }

  std::ofstream out_;
  std::size_t columns_ = 0;
};

}  // namespace hyperwave
