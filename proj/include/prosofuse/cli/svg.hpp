// Copyright 2026 The Prosofuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROSOFUSE_CLI_SVG_HPP_
#define PROSOFUSE_CLI_SVG_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "prosofuse/common.hpp"

namespace prosofuse {

// One plotted contour. `voiced` masks frames out of the polyline (unvoiced
// pitch frames); empty means every frame is drawn. Contours of different
// lengths share the x axis from frame 0.
struct ContourSeries {
  std::string label;
  std::vector<double> values;
  std::vector<bool> voiced;
};

struct ContourPlot {
  std::vector<ContourSeries> series;
  std::string title;
  std::string x_label = "frame";
  std::string y_label = "value";
};

namespace svg_detail {

// Fixed palette so a given series index always renders the same color.
inline const char* series_color(std::size_t i) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b"};
  return kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

// %.6g keeps coordinates compact and printf gives the same bytes on every
// run, which the byte-determinism contract for plot artifacts relies on.
inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline bool frame_voiced(const ContourSeries& s, std::size_t i) {
  return s.voiced.empty() || (i < s.voiced.size() && s.voiced[i]);
}

// Round outward to one significant-ish tick step so axis labels stay short.
inline double tick_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double step = 10.0;
  if (norm <= 1.0) {
    step = 1.0;
  } else if (norm <= 2.0) {
    step = 2.0;
  } else if (norm <= 5.0) {
    step = 5.0;
  }
  return step * mag;
}

}  // namespace svg_detail

// Renders the plot as a standalone SVG 1.1 document. Byte-deterministic for a
// fixed plot: no timestamps, locale-independent numbers, series colors and
// element order fixed by input order. Each series becomes one <g> holding its
// polylines (one per voiced run, so unvoiced gaps break the line).
inline std::string render_contour_svg(const ContourPlot& plot) {
  if (plot.series.empty()) throw ArgumentError("plot: no series");
  for (const auto& s : plot.series) {
    if (s.values.empty())
      throw ArgumentError("plot: series " + s.label + " is empty");
    for (const double v : s.values)
      if (!std::isfinite(v))
        throw ArgumentError("plot: series " + s.label +
                            " has a non-finite value");
  }

  const double width = 800.0, height = 480.0;
  const double left = 64.0, right = 16.0, top = 40.0, bottom = 48.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  std::size_t max_len = 0;
  double ymin = 0.0, ymax = 0.0;
  bool any = false;
  for (const auto& s : plot.series) {
    max_len = std::max(max_len, s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (!svg_detail::frame_voiced(s, i)) continue;
      if (!any) {
        ymin = ymax = s.values[i];
        any = true;
      } else {
        ymin = std::min(ymin, s.values[i]);
        ymax = std::max(ymax, s.values[i]);
      }
    }
  }
  if (!any) throw ArgumentError("plot: every frame is masked");
  if (ymax - ymin < 1e-12) {
    // Flat contour: pad so the line sits mid-plot instead of dividing by zero.
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double xmax = max_len > 1 ? static_cast<double>(max_len - 1) : 1.0;

  const auto sx = [&](double frame) { return left + frame / xmax * plot_w; };
  const auto sy = [&](double v) {
    return top + (ymax - v) / (ymax - ymin) * plot_h;
  };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "viewBox=\"0 0 800 480\" width=\"800\" height=\"480\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"480\" "
         "fill=\"#ffffff\"/>\n";
  if (!plot.title.empty()) {
    out += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" +
           svg_detail::xml_escape(plot.title) + "</text>\n";
  }

  // Axes.
  out += "<g stroke=\"#333333\" stroke-width=\"1\" fill=\"none\">\n";
  out += "<line x1=\"" + svg_detail::num(left) + "\" y1=\"" +
         svg_detail::num(top) + "\" x2=\"" + svg_detail::num(left) +
         "\" y2=\"" + svg_detail::num(top + plot_h) + "\"/>\n";
  out += "<line x1=\"" + svg_detail::num(left) + "\" y1=\"" +
         svg_detail::num(top + plot_h) + "\" x2=\"" +
         svg_detail::num(left + plot_w) + "\" y2=\"" +
         svg_detail::num(top + plot_h) + "\"/>\n";
  out += "</g>\n";

  // Tick labels, about five per axis.
  out += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
  const double ystep = svg_detail::tick_step(ymax - ymin);
  for (double v = std::ceil(ymin / ystep) * ystep; v <= ymax + 1e-9 * ystep;
       v += ystep) {
    out += "<text x=\"" + svg_detail::num(left - 6.0) + "\" y=\"" +
           svg_detail::num(sy(v) + 4.0) + "\" text-anchor=\"end\">" +
           svg_detail::num(v) + "</text>\n";
  }
  const double xstep = svg_detail::tick_step(xmax);
  for (double v = 0.0; v <= xmax + 1e-9 * xstep; v += xstep) {
    out += "<text x=\"" + svg_detail::num(sx(v)) + "\" y=\"" +
           svg_detail::num(top + plot_h + 16.0) +
           "\" text-anchor=\"middle\">" + svg_detail::num(v) + "</text>\n";
  }
  out += "<text x=\"" + svg_detail::num(left + plot_w / 2.0) + "\" y=\"" +
         svg_detail::num(height - 8.0) + "\" text-anchor=\"middle\">" +
         svg_detail::xml_escape(plot.x_label) + "</text>\n";
  out += "<text x=\"14\" y=\"" + svg_detail::num(top + plot_h / 2.0) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
         svg_detail::num(top + plot_h / 2.0) + ")\">" +
         svg_detail::xml_escape(plot.y_label) + "</text>\n";
  out += "</g>\n";

  // Series, one group each.
  for (std::size_t si = 0; si < plot.series.size(); ++si) {
    const auto& s = plot.series[si];
    out += "<g fill=\"none\" stroke=\"";
    out += svg_detail::series_color(si);
    out += "\" stroke-width=\"1.5\">\n";
    std::string points;
    std::size_t run = 0;
    const auto flush = [&]() {
      if (run >= 2) {
        out += "<polyline points=\"" + points + "\"/>\n";
      } else if (run == 1) {
        // A lone voiced frame gets a dot so it is not silently dropped.
        const auto sp = points.find(',');
        out += "<circle cx=\"" + points.substr(0, sp) + "\" cy=\"" +
               points.substr(sp + 1) + "\" r=\"1.5\" stroke=\"none\" fill=\"" +
               svg_detail::series_color(si) + "\"/>\n";
      }
      points.clear();
      run = 0;
    };
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (!svg_detail::frame_voiced(s, i)) {
        flush();
        continue;
      }
      if (run > 0) points += ' ';
      points += svg_detail::num(sx(static_cast<double>(i))) + "," +
                svg_detail::num(sy(s.values[i]));
      ++run;
    }
    flush();
    out += "</g>\n";
  }

  // Legend, top-right corner of the plot area.
  out += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t si = 0; si < plot.series.size(); ++si) {
    const double ly = top + 14.0 + 18.0 * static_cast<double>(si);
    out += "<line x1=\"" + svg_detail::num(left + plot_w - 120.0) +
           "\" y1=\"" + svg_detail::num(ly - 4.0) + "\" x2=\"" +
           svg_detail::num(left + plot_w - 96.0) + "\" y2=\"" +
           svg_detail::num(ly - 4.0) + "\" stroke=\"" +
           svg_detail::series_color(si) + "\" stroke-width=\"1.5\"/>\n";
    out += "<text x=\"" + svg_detail::num(left + plot_w - 90.0) + "\" y=\"" +
           svg_detail::num(ly) + "\" fill=\"#333333\">" +
           svg_detail::xml_escape(plot.series[si].label) + "</text>\n";
  }
  out += "</g>\n";
  out += "</svg>\n";
  return out;
}

// CSV sidecar: header "frame,<label>,...", one row per frame up to the
// longest series, empty cells where a series has no frame or the frame is
// masked unvoiced. Full %.17g precision so the CSV round-trips the values.
inline std::string render_contour_csv(const ContourPlot& plot) {
  if (plot.series.empty()) throw ArgumentError("plot: no series");
  std::string out = "frame";
  std::size_t max_len = 0;
  for (const auto& s : plot.series) {
    if (s.values.empty())
      throw ArgumentError("plot: series " + s.label + " is empty");
    std::string label = s.label;
    if (label.find_first_of(",\"\n") != std::string::npos)
      throw ArgumentError("plot: series label needs quoting, rename it: " +
                          label);
    out += "," + label;
    max_len = std::max(max_len, s.values.size());
  }
  out += "\n";
  char buf[64];
  for (std::size_t i = 0; i < max_len; ++i) {
    out += std::to_string(i);
    for (const auto& s : plot.series) {
      out += ",";
      if (i < s.values.size() && svg_detail::frame_voiced(s, i)) {
        std::snprintf(buf, sizeof(buf), "%.17g", s.values[i]);
        out += buf;
      }
    }
    out += "\n";
  }
  return out;
}

// Parses the render_contour_csv layout back into series (labels from the
// header, empty cells become unvoiced frames). Lets `plot contour` replot a
// sidecar or any hand-built file in the same shape.
inline ContourPlot parse_contour_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("contour csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 2 || header[0] != "frame")
    throw FormatError("contour csv: header must be frame,<label>,...");
  ContourPlot plot;
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i].empty())
      throw FormatError("contour csv: empty series label in header");
    plot.series.push_back({header[i], {}, {}});
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    // A trailing empty cell is eaten by getline; pad back to header width.
    while (cells.size() < header.size()) cells.push_back("");
    if (cells.size() != header.size())
      throw FormatError("contour csv line " + std::to_string(lineno) +
                        ": expected " + std::to_string(header.size()) +
                        " cells, got " + std::to_string(cells.size()));
    for (std::size_t i = 1; i < cells.size(); ++i) {
      auto& s = plot.series[i - 1];
      if (cells[i].empty()) {
        s.values.push_back(0.0);
        s.voiced.push_back(false);
        continue;
      }
      try {
        std::size_t pos = 0;
        const double v = std::stod(cells[i], &pos);
        if (pos != cells[i].size()) throw std::invalid_argument(cells[i]);
        s.values.push_back(v);
        s.voiced.push_back(true);
      } catch (const std::exception&) {
        throw FormatError("contour csv line " + std::to_string(lineno) +
                          ": bad number: " + cells[i]);
      }
    }
  }
  for (auto& s : plot.series) {
    if (s.values.empty())
      throw FormatError("contour csv: no data rows");
    // All-voiced series drop the mask, matching hand-built ContourSeries.
    if (std::all_of(s.voiced.begin(), s.voiced.end(),
                    [](bool b) { return b; }))
      s.voiced.clear();
  }
  return plot;
}

// Writes the SVG plus a .csv sidecar next to it holding the plotted values.
inline void write_contour(const ContourPlot& plot, const std::string& path) {
  const std::string svg = render_contour_svg(plot);
  const std::string csv = render_contour_csv(plot);
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << svg;
  }
  std::string csv_path = path;
  const auto dot = csv_path.rfind('.');
  const auto slash = csv_path.find_last_of("/\\");
  if (dot != std::string::npos &&
      (slash == std::string::npos || dot > slash)) {
    csv_path.resize(dot);
  }
  csv_path += ".csv";
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw IoError("cannot write " + csv_path);
  out << csv;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_CLI_SVG_HPP_
