#include "uhdreg/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "uhdreg/csv.hpp"

namespace uhdreg {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 36;
constexpr int kMarginBottom = 48;

const char* kPalette[] = {"#1f6fb4", "#d1495b", "#3a8f5d", "#8a5fb0", "#b07f2a"};

std::string fmt(double v) { return format_double(v); }

}  // namespace

std::string render_svg_chart(const std::vector<PlotSeries>& series,
                             const std::string& title, const std::string& x_label,
                             const std::string& y_label) {
  if (series.empty()) throw std::invalid_argument("render_svg_chart: no series");
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -y_min;
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size()) {
      throw std::invalid_argument("render_svg_chart: series must be nonempty with matching x/y");
    }
    if (!s.yerr.empty() && s.yerr.size() != s.y.size()) {
      throw std::invalid_argument("render_svg_chart: yerr length mismatch");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double err = s.yerr.empty() ? 0.0 : s.yerr[i];
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i] - err);
      y_max = std::max(y_max, s.y[i] + err);
    }
  }
  if (x_max == x_min) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_max == y_min) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) {
    return kMarginTop + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h;
  };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
      << "\">\n"
      << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";

  // frame and axis ticks
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
      << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
      << "\" fill=\"none\" stroke=\"#444444\"/>\n";
  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    double fx = x_min + (x_max - x_min) * t / ticks;
    double fy = y_min + (y_max - y_min) * t / ticks;
    out << "<line x1=\"" << fmt(sx(fx)) << "\" y1=\"" << fmt(kMarginTop + plot_h)
        << "\" x2=\"" << fmt(sx(fx)) << "\" y2=\"" << fmt(kMarginTop + plot_h + 5)
        << "\" stroke=\"#444444\"/>\n"
        << "<text x=\"" << fmt(sx(fx)) << "\" y=\"" << fmt(kMarginTop + plot_h + 18)
        << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << fmt(fx) << "</text>\n";
    out << "<line x1=\"" << fmt(kMarginLeft - 5) << "\" y1=\"" << fmt(sy(fy))
        << "\" x2=\"" << kMarginLeft << "\" y2=\"" << fmt(sy(fy))
        << "\" stroke=\"#444444\"/>\n"
        << "<text x=\"" << fmt(kMarginLeft - 8) << "\" y=\"" << fmt(sy(fy) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">"
        << fmt(fy) << "</text>\n";
  }

  out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" font-size=\"14\" "
      << "text-anchor=\"middle\" font-family=\"sans-serif\">" << title << "</text>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10
      << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">"
      << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "transform=\"rotate(-90 16 " << kHeight / 2 << ")\">" << y_label
      << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& line = series[s];
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    if (line.x.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < line.x.size(); ++i) {
        if (i) out << " ";
        out << fmt(sx(line.x[i])) << "," << fmt(sy(line.y[i]));
      }
      out << "\"/>\n";
    }
    for (std::size_t i = 0; i < line.x.size(); ++i) {
      if (!line.yerr.empty() && line.yerr[i] > 0.0) {
        out << "<line x1=\"" << fmt(sx(line.x[i])) << "\" y1=\""
            << fmt(sy(line.y[i] - line.yerr[i])) << "\" x2=\"" << fmt(sx(line.x[i]))
            << "\" y2=\"" << fmt(sy(line.y[i] + line.yerr[i])) << "\" stroke=\"" << color
            << "\"/>\n";
      }
      out << "<circle cx=\"" << fmt(sx(line.x[i])) << "\" cy=\"" << fmt(sy(line.y[i]))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    out << "<rect x=\"" << kMarginLeft + 10 << "\" y=\"" << fmt(kMarginTop + 8 + 16.0 * s)
        << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n"
        << "<text x=\"" << kMarginLeft + 25 << "\" y=\"" << fmt(kMarginTop + 17 + 16.0 * s)
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << line.label << "</text>\n";
  }

  out << "</svg>\n";
  return out.str();
}

void emit_plot(const std::vector<PlotSeries>& series, const std::string& path,
               const std::string& title, const std::string& x_label,
               const std::string& y_label) {
  write_text_file(path, render_svg_chart(series, title, x_label, y_label));
}

}  // namespace uhdreg
