#include "ampsim/svg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "ampsim/runconfig.hpp"

namespace ampsim {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string svg_line_chart(std::span<const double> x, std::span<const double> y,
                           const std::string& title, const std::string& x_label,
                           const std::string& y_label) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("chart needs matching nonempty series");
  constexpr double kWidth = 640;
  constexpr double kHeight = 400;
  constexpr double kMargin = 56;
  const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
  double xmin = *xmin_it;
  double xmax = *xmax_it;
  double ymin = *ymin_it;
  double ymax = *ymax_it;
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  auto px = [&](double v) { return kMargin + (v - xmin) / (xmax - xmin) * (kWidth - 2 * kMargin); };
  auto py = [&](double v) { return kHeight - kMargin - (v - ymin) / (ymax - ymin) * (kHeight - 2 * kMargin); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << escape(title) << "</text>\n"
      << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin << "\" y2=\""
      << kHeight - kMargin << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\"" << kHeight - kMargin
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 16 " << kHeight / 2
      << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(y_label) << "</text>\n";
  for (auto [v, anchor, xpos, ypos] :
       {std::tuple{ymin, "end", kMargin - 4, py(ymin)}, std::tuple{ymax, "end", kMargin - 4, py(ymax)}}) {
    svg << "<text x=\"" << xpos << "\" y=\"" << ypos << "\" text-anchor=\"" << anchor
        << "\" font-family=\"sans-serif\" font-size=\"10\">" << format_double(v) << "</text>\n";
  }
  for (auto [v, xpos] : {std::pair{xmin, px(xmin)}, std::pair{xmax, px(xmax)}}) {
    svg << "<text x=\"" << xpos << "\" y=\"" << kHeight - kMargin + 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << format_double(v)
        << "</text>\n";
  }
  svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) svg << ' ';
    svg << px(x[i]) << ',' << py(y[i]);
  }
  svg << "\"/>\n</svg>\n";
  return svg.str();
}

}  // namespace ampsim
