#pragma once

#include <span>
#include <string>

namespace ampsim {

/// Self-contained SVG line chart of y against x.
std::string svg_line_chart(std::span<const double> x, std::span<const double> y,
                           const std::string& title, const std::string& x_label,
                           const std::string& y_label);

}  // namespace ampsim
