#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "seba/cheeger.hpp"
#include "seba/grid.hpp"
#include "seba/heuristics.hpp"
#include "seba/io.hpp"

namespace seba {

// Minimal SVG emission: plots are derived from already-written CSV data and
// never feed back into numeric outputs.

namespace svg {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Canvas {
  double width, height;
  std::ostringstream body;

  Canvas(double w, double h) : width(w), height(h) {}

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double sw = 1.0) {
    body << "<line x1='" << num(x1) << "' y1='" << num(y1) << "' x2='" << num(x2)
         << "' y2='" << num(y2) << "' stroke='" << stroke << "' stroke-width='" << num(sw)
         << "'/>\n";
  }
  void polyline(const std::vector<std::array<double, 2>>& pts, const std::string& stroke,
                double sw = 1.0) {
    if (pts.size() < 2) return;
    body << "<polyline fill='none' stroke='" << stroke << "' stroke-width='" << num(sw)
         << "' points='";
    for (const auto& p : pts) body << num(p[0]) << "," << num(p[1]) << " ";
    body << "'/>\n";
  }
  void circle(double cx, double cy, double r, const std::string& fill) {
    body << "<circle cx='" << num(cx) << "' cy='" << num(cy) << "' r='" << num(r)
         << "' fill='" << fill << "'/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& fill) {
    body << "<rect x='" << num(x) << "' y='" << num(y) << "' width='" << num(w)
         << "' height='" << num(h) << "' fill='" << fill << "'/>\n";
  }
  void diamond(double cx, double cy, double r, const std::string& fill) {
    body << "<path d='M " << num(cx) << " " << num(cy - r) << " L " << num(cx + r) << " "
         << num(cy) << " L " << num(cx) << " " << num(cy + r) << " L " << num(cx - r) << " "
         << num(cy) << " Z' fill='" << fill << "'/>\n";
  }
  void text(double x, double y, const std::string& s, double size = 11,
            const std::string& anchor = "middle") {
    body << "<text x='" << num(x) << "' y='" << num(y) << "' font-size='" << num(size)
         << "' font-family='sans-serif' text-anchor='" << anchor << "'>" << s
         << "</text>\n";
  }
  std::string str() const {
    std::ostringstream out;
    out << "<?xml version='1.0' encoding='UTF-8'?>\n<svg xmlns='http://www.w3.org/2000/svg' "
           "width='"
        << num(width) << "' height='" << num(height) << "' viewBox='0 0 " << num(width)
        << " " << num(height) << "'>\n<rect width='100%' height='100%' fill='white'/>\n"
        << body.str() << "</svg>\n";
    return out.str();
  }
};

// Affine data-to-pixel frame with simple axes.
struct Frame {
  double px0, px1, py0, py1;  // pixel box (py0 is the top)
  double dx0, dx1, dy0, dy1;  // data ranges

  double x(double v) const { return px0 + (v - dx0) / (dx1 - dx0) * (px1 - px0); }
  double y(double v) const { return py1 - (v - dy0) / (dy1 - dy0) * (py1 - py0); }

  void axes(Canvas& c, const std::string& xlabel, const std::string& ylabel,
            int xticks = 6, int yticks = 6) const {
    c.line(px0, py1, px1, py1, "black");
    c.line(px0, py0, px0, py1, "black");
    for (int i = 0; i <= xticks; ++i) {
      const double v = dx0 + (dx1 - dx0) * i / xticks;
      const double px = x(v);
      c.line(px, py1, px, py1 + 4, "black");
      c.text(px, py1 + 16, num(v));
    }
    for (int i = 0; i <= yticks; ++i) {
      const double v = dy0 + (dy1 - dy0) * i / yticks;
      const double py = y(v);
      c.line(px0 - 4, py, px0, py, "black");
      c.text(px0 - 7, py + 4, num(v), 11, "end");
    }
    c.text((px0 + px1) / 2, py1 + 32, xlabel, 12);
    c.text(px0, py0 - 8, ylabel, 12, "start");
  }
};

inline std::string palette_color(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors[i % 10];
}

// Blue-white-red style map on [0, 1].
inline std::string heat_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const auto mix = [&](double a, double b) { return a + (b - a) * t; };
  const int r = static_cast<int>(std::lround(mix(30, 215)));
  const int g = static_cast<int>(std::lround(mix(40, 48)));
  const int b = static_cast<int>(std::lround(mix(120, 39)));
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace svg

// Rescaled spectrum, one dot per plotted r (EigValNeum-style figure).
inline void write_spectrum_svg(const std::string& path, const RescaledSpectrum& spec) {
  svg::Canvas c(560, 360);
  if (!spec.values.empty()) {
    double lo = spec.values.front().second, hi = lo;
    int rlo = spec.values.front().first, rhi = rlo;
    for (const auto& [r, v] : spec.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      rlo = std::min(rlo, r);
      rhi = std::max(rhi, r);
    }
    if (hi - lo < 1e-12) {
      hi += 1.0;
      lo -= 1.0;
    }
    const double pad = 0.06 * (hi - lo);
    svg::Frame f{60, 530, 20, 310, static_cast<double>(rlo) - 0.5,
                 static_cast<double>(rhi) + 0.5, lo - pad, hi + pad};
    f.axes(c, "r", "rescaled eigenvalue");
    std::vector<std::array<double, 2>> pts;
    for (const auto& [r, v] : spec.values) pts.push_back({f.x(r), f.y(v)});
    c.polyline(pts, "#1f77b4", 1.2);
    for (const auto& p : pts) c.circle(p[0], p[1], 3, "#1f77b4");
  }
  write_text_file(path, c.str());
}

// Stacked min-value curves: one polyline per k over r, diamonds at the
// optimal (k, r_min(k)) pairs (colMinVal-style figure).
inline void write_scan_svg(const std::string& path, const ScanTable& table) {
  svg::Canvas c(640, 420);
  double hi = 0.0;
  for (const auto& [r, col] : table.minval)
    for (double v : col) hi = std::max(hi, v);
  if (hi <= 0.0) hi = 1.0;
  svg::Frame f{60, 610, 20, 360, 1.5, static_cast<double>(table.r_max) + 0.5, 0.0,
               hi * 1.06};
  f.axes(c, "r", "Min(S, k)");
  for (int k = 1; k <= table.r_max; ++k) {
    std::vector<std::array<double, 2>> pts;
    for (const auto& [r, col] : table.minval)
      if (k <= static_cast<int>(col.size()))
        pts.push_back({f.x(r), f.y(col[static_cast<std::size_t>(k - 1)])});
    c.polyline(pts, svg::palette_color(static_cast<std::size_t>(k - 1)), 1.0);
  }
  for (const auto& [k, r] : table.optimal_pairs)
    if (table.has(r, k)) c.diamond(f.x(r), f.y(table.at(r, k)), 4, "black");
  write_text_file(path, c.str());
}

inline void write_rmin_svg(const std::string& path, const ScanTable& table) {
  svg::Canvas c(560, 360);
  svg::Frame f{60, 530, 20, 310, 0.5, static_cast<double>(table.r_max) + 0.5, 0.0,
               static_cast<double>(table.r_max) + 0.5};
  f.axes(c, "k", "r_min(k)");
  std::vector<std::array<double, 2>> pts;
  for (const auto& [k, r] : table.r_min_of_k) pts.push_back({f.x(k), f.y(r)});
  c.polyline(pts, "#1f77b4", 1.2);
  for (const auto& p : pts) c.circle(p[0], p[1], 3, "#1f77b4");
  write_text_file(path, c.str());
}

// Per-cell heatmap of a grid field, optionally overlaying contour polylines.
inline void write_field_svg(const std::string& path, const GridField& field,
                            const std::vector<std::vector<std::array<double, 2>>>& contours = {}) {
  const double aspect = (field.y1 - field.y0) / (field.x1 - field.x0);
  const double pw = 640, ph = std::max(120.0, pw * aspect);
  svg::Canvas c(pw + 20, ph + 20);
  svg::Frame f{10, pw + 10, 10, ph + 10, field.x0, field.x1, field.y0, field.y1};
  double lo = field.values[0], hi = field.values[0];
  for (double v : field.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi - lo < 1e-300 ? 1.0 : hi - lo;
  const double cw = f.x(field.x0 + field.dx()) - f.x(field.x0);
  const double ch = f.y(field.y0) - f.y(field.y0 + field.dy());
  for (int iy = 0; iy < field.ny; ++iy)
    for (int ix = 0; ix < field.nx; ++ix) {
      const double v = (field.value(ix, iy) - lo) / span;
      c.rect(f.x(field.node_x(ix)) - cw / 2, f.y(field.node_y(iy)) - ch / 2, cw + 0.5,
             ch + 0.5, svg::heat_color(v));
    }
  for (const auto& poly : contours) {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(poly.size());
    for (const auto& p : poly) pts.push_back({f.x(p[0]), f.y(p[1])});
    c.polyline(pts, "white", 1.5);
  }
  write_text_file(path, c.str());
}

// The (tau, h) sweep with the chosen threshold marked.
inline void write_cheeger_curve_svg(const std::string& path, const CheegerResult& res) {
  svg::Canvas c(560, 360);
  double hlo = 0.0, hhi = 0.0, tlo = 0.0, thi = 1.0;
  bool first = true;
  for (const auto& lev : res.levels) {
    if (lev.empty) continue;
    if (first) {
      hhi = hlo = lev.h;
      tlo = thi = lev.tau;
      first = false;
    }
    hlo = std::min(hlo, lev.h);
    hhi = std::max(hhi, lev.h);
    tlo = std::min(tlo, lev.tau);
    thi = std::max(thi, lev.tau);
  }
  if (first || thi - tlo < 1e-300) {
    thi = tlo + 1.0;
    hhi = hlo + 1.0;
  }
  svg::Frame f{60, 530, 20, 310, tlo, thi, 0.0, hhi * 1.06};
  f.axes(c, "tau", "h");
  std::vector<std::array<double, 2>> pts;
  for (const auto& lev : res.levels)
    if (!lev.empty) pts.push_back({f.x(lev.tau), f.y(lev.h)});
  c.polyline(pts, "#1f77b4", 1.2);
  c.line(f.x(res.tau_star), f.py0, f.x(res.tau_star), f.py1, "#d62728", 1.0);
  c.circle(f.x(res.tau_star), f.y(res.h_star), 4, "#d62728");
  write_text_file(path, c.str());
}

}  // namespace seba
