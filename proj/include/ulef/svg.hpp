#pragma once

#include <string>
#include <vector>

namespace ulef {

/// Static SVG charts. Coordinates are printed with fixed precision so the
/// output is byte-stable.
std::string bar_chart(const std::string& title, const std::vector<std::string>& labels,
                      const std::vector<double>& values, const std::string& y_label);

struct Series {
  std::string name;
  std::vector<double> x, y;
};
std::string line_chart(const std::string& title, const std::vector<Series>& series, const std::string& x_label,
                       const std::string& y_label);

}  // namespace ulef
