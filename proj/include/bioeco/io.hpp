#pragma once

// Formatting helpers shared by the CSV emitters: decimal point, 12
// significant digits, no locale dependence, byte-stable across runs.

#include <cstdio>
#include <string>
#include <vector>

namespace bioeco::io {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string boolean(bool b) { return b ? "true" : "false"; }

inline std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

}  // namespace bioeco::io
