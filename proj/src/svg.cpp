#include "fairbandit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fairbandit {

namespace {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (t, value), t-sorted
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

std::vector<std::string> split_spec(const std::string& spec) {
  std::vector<std::string> names;
  std::istringstream in(spec);
  std::string token;
  while (std::getline(in, token, ',')) {
    auto begin = token.find_first_not_of(' ');
    auto end = token.find_last_not_of(' ');
    if (begin != std::string::npos)
      names.push_back(token.substr(begin, end - begin + 1));
  }
  if (names.empty())
    throw std::invalid_argument("render_plot: empty metric list");
  return names;
}

}  // namespace

std::string render_plot(const std::vector<ResultRow>& rows,
                        const std::string& metric_spec) {
  if (rows.empty()) throw std::invalid_argument("render_plot: empty table");

  std::vector<Series> series;
  for (const std::string& name : split_spec(metric_spec)) {
    bool has_aggregate = false;
    for (const ResultRow& row : rows) {
      if (row.metric == name && row.trial == -1) {
        has_aggregate = true;
        break;
      }
    }
    std::map<long, Series> by_trial;
    for (const ResultRow& row : rows) {
      if (row.metric != name) continue;
      if (has_aggregate != (row.trial == -1)) continue;
      if (!std::isfinite(row.value)) continue;
      Series& s = by_trial[row.trial];
      if (s.points.empty()) {
        s.label = name;
        if (!has_aggregate && row.trial >= 0)
          s.label += " trial " + std::to_string(row.trial);
      }
      s.points.emplace_back(static_cast<double>(row.t), row.value);
    }
    if (by_trial.empty()) {
      std::set<std::string> available;
      for (const ResultRow& row : rows) available.insert(row.metric);
      std::string listing;
      for (const std::string& metric : available)
        listing += (listing.empty() ? "" : ", ") + metric;
      throw std::invalid_argument("render_plot: no rows for metric \"" + name +
                                  "\"; available: " + listing);
    }
    for (auto& [trial, s] : by_trial) {
      std::sort(s.points.begin(), s.points.end());
      series.push_back(std::move(s));
    }
  }

  double x_min = series[0].points[0].first, x_max = x_min;
  double y_min = series[0].points[0].second, y_max = y_min;
  for (const Series& s : series) {
    for (auto [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;

  const double width = 840, height = 520;
  const double left = 80, right = 40, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) {
    return top + plot_h - (y - y_min) / (y_max - y_min) * plot_h;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  const int ticks = 5;
  out << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (int i = 0; i <= ticks; ++i) {
    double fx = x_min + (x_max - x_min) * i / ticks;
    double fy = y_min + (y_max - y_min) * i / ticks;
    out << "<line x1=\"" << px(fx) << "\" y1=\"" << top << "\" x2=\"" << px(fx)
        << "\" y2=\"" << top + plot_h << "\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << py(fy) << "\" x2=\""
        << left + plot_w << "\" y2=\"" << py(fy) << "\"/>\n";
  }
  out << "</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";
  for (int i = 0; i <= ticks; ++i) {
    double fx = x_min + (x_max - x_min) * i / ticks;
    double fy = y_min + (y_max - y_min) * i / ticks;
    out << "<text x=\"" << px(fx) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\">" << fmt(fx) << "</text>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << py(fy) + 4
        << "\" text-anchor=\"end\">" << fmt(fy) << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 16
      << "\" text-anchor=\"middle\">t</text>\n";
  out << "</g>\n";

  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[s].points)
      out << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
    out << "\"/>\n";
  }

  // Legend: cap the listing so per-trial plots with many trials stay legible.
  std::size_t legend_count = std::min<std::size_t>(series.size(), 8);
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t s = 0; s < legend_count; ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    double ly = top + 8 + 16 * static_cast<double>(s);
    out << "<line x1=\"" << left + plot_w - 150 << "\" y1=\"" << ly
        << "\" x2=\"" << left + plot_w - 130 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + plot_w - 124 << "\" y=\"" << ly + 4
        << "\" fill=\"#333333\">" << series[s].label << "</text>\n";
  }
  if (series.size() > legend_count) {
    out << "<text x=\"" << left + plot_w - 150 << "\" y=\""
        << top + 8 + 16 * static_cast<double>(legend_count) + 4
        << "\" fill=\"#333333\">(+" << series.size() - legend_count
        << " more)</text>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace fairbandit
