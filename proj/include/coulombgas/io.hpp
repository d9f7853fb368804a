#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace coulombgas {

/// Shortest round-trippable decimal form (17 significant digits).
inline std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Minimal CSV emitter: '.' decimal, ',' separator, mandatory header row.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out, const std::vector<std::string>& header)
      : out_(out) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << format_full(values[i]);
    }
    out_ << '\n';
  }

  void row_raw(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

}  // namespace coulombgas
