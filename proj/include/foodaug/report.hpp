#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "foodaug/error.hpp"
#include "foodaug/imbalance.hpp"
#include "foodaug/metrics.hpp"

namespace foodaug {

// Figures are SVG bar charts; every figure has a plain-text sidecar table so
// checks can assert on numbers instead of pixels.

struct BarSeries {
  std::string name;
  std::vector<double> values;
};

namespace detail {

inline std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string fmt1(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace detail

// Grouped vertical bar chart. Deterministic output for identical inputs.
inline std::string render_bar_chart_svg(const std::string& title,
                                        const std::vector<std::string>& categories,
                                        const std::vector<BarSeries>& series) {
  for (const auto& s : series)
    if (s.values.size() != categories.size())
      throw Error(ErrorKind::validation,
                  "bar chart series '" + s.name + "' length mismatch");
  static const char* palette[] = {"#4878a8", "#e49444", "#6a9f58", "#d1605e"};

  double max_value = 1.0;
  for (const auto& s : series)
    for (double v : s.values) max_value = std::max(max_value, v);

  const int chart_w = std::max<int>(480, 30 * static_cast<int>(categories.size() *
                                                               std::max<size_t>(1, series.size())) +
                                             120);
  const int chart_h = 360;
  const int margin_l = 60, margin_r = 20, margin_t = 50, margin_b = 130;
  const double plot_w = chart_w - margin_l - margin_r;
  const double plot_h = chart_h - margin_t - margin_b;
  const double group_w = plot_w / std::max<size_t>(1, categories.size());
  const double bar_w = group_w * 0.8 / std::max<size_t>(1, series.size());

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart_w
      << "\" height=\"" << chart_h << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << chart_w / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << detail::svg_escape(title) << "</text>\n";

  // y axis with 4 gridlines
  for (int g = 0; g <= 4; ++g) {
    double frac = g / 4.0;
    double y = margin_t + plot_h * (1.0 - frac);
    svg << "<line x1=\"" << margin_l << "\" y1=\"" << detail::fmt1(y)
        << "\" x2=\"" << chart_w - margin_r << "\" y2=\"" << detail::fmt1(y)
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << margin_l - 6 << "\" y=\"" << detail::fmt1(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << detail::fmt1(max_value * frac) << "</text>\n";
  }

  for (size_t ci = 0; ci < categories.size(); ++ci) {
    double group_x = margin_l + group_w * ci + group_w * 0.1;
    for (size_t si = 0; si < series.size(); ++si) {
      double v = series[si].values[ci];
      double h = plot_h * (v / max_value);
      double x = group_x + bar_w * si;
      double y = margin_t + plot_h - h;
      svg << "<rect x=\"" << detail::fmt1(x) << "\" y=\"" << detail::fmt1(y)
          << "\" width=\"" << detail::fmt1(bar_w) << "\" height=\""
          << detail::fmt1(h) << "\" fill=\"" << palette[si % 4] << "\"/>\n";
    }
    double label_x = margin_l + group_w * ci + group_w / 2;
    double label_y = margin_t + plot_h + 10;
    svg << "<text x=\"" << detail::fmt1(label_x) << "\" y=\""
        << detail::fmt1(label_y)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\" "
           "transform=\"rotate(-45 "
        << detail::fmt1(label_x) << " " << detail::fmt1(label_y) << ")\">"
        << detail::svg_escape(categories[ci]) << "</text>\n";
  }

  // legend
  for (size_t si = 0; si < series.size(); ++si) {
    double x = margin_l + 140.0 * si;
    double y = chart_h - 14;
    svg << "<rect x=\"" << detail::fmt1(x) << "\" y=\"" << detail::fmt1(y - 10)
        << "\" width=\"12\" height=\"12\" fill=\"" << palette[si % 4]
        << "\"/>\n";
    svg << "<text x=\"" << detail::fmt1(x + 16) << "\" y=\"" << detail::fmt1(y)
        << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << detail::svg_escape(series[si].name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write file: " + path);
  out << content;
}

// Sidecar data table: tab-separated, one row per category.
inline std::string render_bar_chart_table(
    const std::string& title, const std::vector<std::string>& categories,
    const std::vector<BarSeries>& series) {
  std::ostringstream out;
  out << "# " << title << '\n';
  out << "category";
  for (const auto& s : series) out << '\t' << s.name;
  out << '\n';
  for (size_t ci = 0; ci < categories.size(); ++ci) {
    out << categories[ci];
    for (const auto& s : series) out << '\t' << format_percent(s.values[ci]);
    out << '\n';
  }
  return out.str();
}

inline void write_figure(const std::string& path_stem, const std::string& title,
                         const std::vector<std::string>& categories,
                         const std::vector<BarSeries>& series) {
  write_text_file(path_stem + ".svg",
                  render_bar_chart_svg(title, categories, series));
  write_text_file(path_stem + ".txt",
                  render_bar_chart_table(title, categories, series));
}

// Distribution histogram as fixed-width text.
inline std::string render_distribution_table(const std::string& title,
                                              const ImbalanceReport& report) {
  std::ostringstream out;
  out << "# " << title << '\n';
  out << "total: " << report.total << '\n';
  out << "max/min ratio: " << format_percent(report.max_min_ratio) << '\n';
  out << "label\tcount\tshare\n";
  for (const auto& row : report.rows)
    out << row.label << '\t' << row.count << '\t'
        << format_percent(100.0 * row.share) << "%\n";
  return out.str();
}

// The metrics grid: one row per (task, model, augmentation) cell, matching
// the comparative table layout, with delta columns when both cells exist.
struct GridCell {
  std::optional<MetricsReport> report;
};

inline std::string render_metrics_grid(
    const std::vector<std::pair<Task, std::string>>& rows,
    const std::map<std::string, MetricsReport>& reports_by_key) {
  // key format: task|model|aug
  std::ostringstream out;
  out << "task\tmodel\taugmentation\tprecision\trecall\taccuracy\tf1\n";
  auto cell = [&](Task task, const std::string& model, bool aug)
      -> std::optional<MetricsReport> {
    std::string key = std::string(to_string(task)) + "|" + model + "|" +
                      (aug ? "with" : "without");
    auto it = reports_by_key.find(key);
    if (it == reports_by_key.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& [task, model] : rows) {
    for (bool aug : {false, true}) {
      out << to_string(task) << '\t' << model << '\t'
          << (aug ? "with" : "without") << '\t';
      auto r = cell(task, model, aug);
      if (!r) {
        out << "absent\tabsent\tabsent\tabsent\n";
        continue;
      }
      out << format_percent(r->metrics.macro_precision) << '\t'
          << format_percent(r->metrics.macro_recall) << '\t'
          << format_percent(r->metrics.accuracy) << '\t'
          << format_percent(r->metrics.macro_f1) << '\n';
    }
    auto without = cell(task, model, false);
    auto with = cell(task, model, true);
    if (without && with) {
      DeltaReport d = compare_runs(*without, *with);
      out << to_string(task) << '\t' << model << "\tdelta\t"
          << format_percent(d.d_precision) << '\t' << format_percent(d.d_recall)
          << '\t' << format_percent(d.d_accuracy) << '\t'
          << format_percent(d.d_f1) << '\n';
    }
  }
  return out.str();
}

}  // namespace foodaug
