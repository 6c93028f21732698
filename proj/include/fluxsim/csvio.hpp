#pragma once

#include <cstdio>
#include <string>
#include <vector>

// CSV dialect used by every subcommand: comma separator, '.' decimal,
// LF endings, reals at 17 significant digits so round-trips are exact.

namespace fluxsim::csv {

inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  row += '\n';
  return row;
}

inline std::string row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(g17(v));
  return join(cells);
}

} // namespace fluxsim::csv
