#include "gcm/app/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "gcm/app/table.hpp"

namespace gcm::app {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 160.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 50.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

// Fixed precision keeps coordinates short and platform independent.
std::string coord(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2f", v);
  std::string s(buf.data());
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick_label(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.3g", v);
  std::string s(buf.data());
  if (s == "-0") s = "0";
  return s;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range padded(double lo, double hi) {
  if (hi - lo <= 0.0) {
    const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

std::string header(double w, double h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         coord(w) + "\" height=\"" + coord(h) + "\" viewBox=\"0 0 " + coord(w) + " " + coord(h) + "\">\n" +
         "<rect x=\"0\" y=\"0\" width=\"" + coord(w) + "\" height=\"" + coord(h) + "\" fill=\"white\"/>\n";
}

std::string axes(const std::string& x_label, const std::string& y_label, Range xr, Range yr) {
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  std::string out;
  out += "<rect x=\"" + coord(kLeft) + "\" y=\"" + coord(kTop) + "\" width=\"" + coord(pw) + "\" height=\"" +
         coord(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = kLeft + pw * i / 4.0;
    const double fy = kTop + ph * (1.0 - i / 4.0);
    out += "<text x=\"" + coord(fx) + "\" y=\"" + coord(kTop + ph + 15) + "\" text-anchor=\"middle\">" +
           tick_label(xr.lo + (xr.hi - xr.lo) * i / 4.0) + "</text>\n";
    out += "<text x=\"" + coord(kLeft - 5) + "\" y=\"" + coord(fy + 4) + "\" text-anchor=\"end\">" +
           tick_label(yr.lo + (yr.hi - yr.lo) * i / 4.0) + "</text>\n";
  }
  out += "<text x=\"" + coord(kLeft + pw / 2) + "\" y=\"" + coord(kHeight - 12) + "\" text-anchor=\"middle\">" +
         escape(x_label) + "</text>\n";
  out += "<text x=\"15\" y=\"" + coord(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
         coord(kTop + ph / 2) + ")\">" + escape(y_label) + "</text>\n";
  out += "</g>\n";
  return out;
}

}  // namespace

std::string render_line_chart(const LineChart& chart) {
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  std::size_t points = 0;
  for (const auto& s : chart.series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("series " + s.label + ": x and y differ in length");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
      ++points;
    }
  }
  if (points == 0) throw std::invalid_argument("nothing to plot: empty series");
  const Range xr = padded(xlo, xhi);
  const Range yr = padded(ylo, yhi);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + pw * (x - xr.lo) / (xr.hi - xr.lo); };
  auto py = [&](double y) { return kTop + ph * (1.0 - (y - yr.lo) / (yr.hi - yr.lo)); };

  std::string out = header(kWidth, kHeight);
  out += axes(chart.x_label, chart.y_label, xr, yr);
  if (yr.lo < 0.0 && yr.hi > 0.0) {
    out += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(py(0.0)) + "\" x2=\"" + coord(kLeft + pw) + "\" y2=\"" +
           coord(py(0.0)) + "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto& s = chart.series[k];
    const char* colour = kPalette[k % kPalette.size()];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += coord(px(s.x[i])) + "," + coord(py(s.y[i]));
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" + pts +
           "\"/>\n";
    const double ly = kTop + 14.0 * (k + 1);
    out += "<line x1=\"" + coord(kWidth - kRight + 10) + "\" y1=\"" + coord(ly - 4) + "\" x2=\"" +
           coord(kWidth - kRight + 30) + "\" y2=\"" + coord(ly - 4) + "\" stroke=\"" + colour +
           "\" stroke-width=\"1.5\"/>\n";
    out += "<text x=\"" + coord(kWidth - kRight + 34) + "\" y=\"" + coord(ly) +
           "\" font-family=\"sans-serif\" font-size=\"10\">" + escape(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_heatmap(const Heatmap& map, double zero_level) {
  if (map.x.empty() || map.y.empty()) throw std::invalid_argument("nothing to plot: empty grid");
  if (map.z.size() != map.x.size() * map.y.size()) throw std::invalid_argument("grid size mismatch");
  double zmax = -INFINITY, zmin = INFINITY;
  for (double z : map.z) {
    if (z > zero_level && std::isfinite(z)) {
      zmax = std::max(zmax, z);
      zmin = std::min(zmin, z);
    }
  }
  const Range xr = padded(map.x.front(), map.x.back());
  const Range yr = padded(map.y.front(), map.y.back());
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const double cw = pw / static_cast<double>(map.x.size());
  const double ch = ph / static_cast<double>(map.y.size());

  std::string out = header(kWidth, kHeight);
  for (std::size_t i = 0; i < map.y.size(); ++i) {
    for (std::size_t j = 0; j < map.x.size(); ++j) {
      const double z = map.z[i * map.x.size() + j];
      std::string fill = "#ffffff";
      if (z > zero_level && std::isfinite(z)) {
        const double span = std::log(zmax) - std::log(zmin);
        const double u = span > 0.0 ? (std::log(z) - std::log(zmin)) / span : 1.0;
        const int red = 255;
        const int green = static_cast<int>(std::lround(220.0 * (1.0 - u)));
        const int blue = static_cast<int>(std::lround(160.0 * (1.0 - u)));
        std::array<char, 8> buf{};
        std::snprintf(buf.data(), buf.size(), "#%02x%02x%02x", red, green, blue);
        fill = buf.data();
      }
      const double x0 = kLeft + cw * static_cast<double>(j);
      const double y0 = kTop + ph - ch * static_cast<double>(i + 1);
      out += "<rect x=\"" + coord(x0) + "\" y=\"" + coord(y0) + "\" width=\"" + coord(cw) + "\" height=\"" +
             coord(ch) + "\" fill=\"" + fill + "\"/>\n";
    }
  }
  out += axes(map.x_label, map.y_label, xr, yr);
  const std::string range = std::isfinite(zmax) ? format_number(zmin) + " .. " + format_number(zmax) : "none";
  out += "<text x=\"" + coord(kWidth - kRight + 10) + "\" y=\"" + coord(kTop + 14) +
         "\" font-family=\"sans-serif\" font-size=\"10\">" + escape(map.z_label) + " &gt; 0: " + range + "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace gcm::app
