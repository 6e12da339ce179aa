#ifndef UHDREG_SVG_HPP
#define UHDREG_SVG_HPP

#include <string>
#include <vector>

namespace uhdreg {

/// One labeled line in a chart, with optional symmetric error bars.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> yerr;  // empty, or same length as y
};

/// Renders a static SVG line chart with markers and error bars. Output is
/// byte-stable: identical inputs produce identical bytes. A single-point
/// series draws a marker and no line.
std::string render_svg_chart(const std::vector<PlotSeries>& series,
                             const std::string& title, const std::string& x_label,
                             const std::string& y_label);

void emit_plot(const std::vector<PlotSeries>& series, const std::string& path,
               const std::string& title, const std::string& x_label,
               const std::string& y_label);

}  // namespace uhdreg

#endif
