#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "srdm/image.hpp"

namespace srdm {

inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("pearson: need at least 2 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares for y = slope * x + intercept.
inline LineFit linfit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("linfit: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("linfit: need at least 2 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linfit: zero x-variance");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

// Finds the region x region window with the maximum mean dispersion index
// (per-pixel variance-to-mean ratio across methods; mean-zero pixels carry
// dispersion 0), via an integral image. Ties go to the smallest row, then col.
inline std::pair<int, int> select_comparison_region(const std::vector<GrayImage>& sr_images,
                                                    int region = 400) {
  if (sr_images.size() < 2)
    throw std::invalid_argument("select_comparison_region: need at least 2 images");
  const int w = sr_images[0].width;
  const int h = sr_images[0].height;
  for (const auto& img : sr_images)
    if (img.width != w || img.height != h)
      throw std::invalid_argument("select_comparison_region: mismatched dimensions");
  if (region > w || region > h)
    throw std::invalid_argument("select_comparison_region: region larger than image");

  const double m = static_cast<double>(sr_images.size());
  // Integral image of the dispersion map, (h+1) x (w+1).
  std::vector<double> integral(static_cast<std::size_t>(h + 1) * (w + 1), 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double mean = 0.0;
      for (const auto& img : sr_images) mean += img.at(y, x);
      mean /= m;
      double dispersion = 0.0;
      if (mean > 0.0) {
        double var = 0.0;
        for (const auto& img : sr_images) {
          double d = img.at(y, x) - mean;
          var += d * d;
        }
        var /= m;
        dispersion = var / mean;
      }
      integral[static_cast<std::size_t>(y + 1) * (w + 1) + (x + 1)] =
          dispersion + integral[static_cast<std::size_t>(y) * (w + 1) + (x + 1)] +
          integral[static_cast<std::size_t>(y + 1) * (w + 1) + x] -
          integral[static_cast<std::size_t>(y) * (w + 1) + x];
    }
  }

  auto window_sum = [&](int row, int col) {
    return integral[static_cast<std::size_t>(row + region) * (w + 1) + (col + region)] -
           integral[static_cast<std::size_t>(row) * (w + 1) + (col + region)] -
           integral[static_cast<std::size_t>(row + region) * (w + 1) + col] +
           integral[static_cast<std::size_t>(row) * (w + 1) + col];
  };

  int best_row = 0, best_col = 0;
  double best = window_sum(0, 0);
  for (int row = 0; row + region <= h; ++row) {
    for (int col = 0; col + region <= w; ++col) {
      double s = window_sum(row, col);
      if (s > best) {
        best = s;
        best_row = row;
        best_col = col;
      }
    }
  }
  return {best_row, best_col};
}

struct MethodScore {
  std::string method_id;
  double metric_score = 0.0;
  double glicko = 0.0;
  std::optional<double> backproj;
};

struct MethodScoreTable {
  std::vector<MethodScore> rows;
};

struct CorrelationSummary {
  std::string axis;  // "glicko" or "backproj"
  double pearson_r = 0.0;
  LineFit fit;
  bool degenerate = false;  // only two points: |r| is 1 by construction
};

struct CorrelationReport {
  std::vector<CorrelationSummary> summaries;
  MethodScoreTable table;
};

inline CorrelationReport correlation_report(const MethodScoreTable& table) {
  if (table.rows.size() < 2) throw std::invalid_argument("correlation_report: need >= 2 rows");
  CorrelationReport report;
  report.table = table;

  std::vector<double> metric, glicko, backproj;
  bool have_backproj = true;
  for (const auto& row : table.rows) {
    metric.push_back(row.metric_score);
    glicko.push_back(row.glicko);
    if (row.backproj)
      backproj.push_back(*row.backproj);
    else
      have_backproj = false;
  }

  CorrelationSummary vs_glicko;
  vs_glicko.axis = "glicko";
  vs_glicko.pearson_r = pearson(metric, glicko);
  vs_glicko.fit = linfit(metric, glicko);
  vs_glicko.degenerate = table.rows.size() == 2;
  report.summaries.push_back(vs_glicko);

  if (have_backproj) {
    CorrelationSummary vs_bp;
    vs_bp.axis = "backproj";
    vs_bp.pearson_r = pearson(metric, backproj);
    vs_bp.fit = linfit(metric, backproj);
    vs_bp.degenerate = table.rows.size() == 2;
    report.summaries.push_back(vs_bp);
  }
  return report;
}

// Minimal scatter-plus-fit-line SVG, one document per correlation axis.
inline std::string correlation_svg(const MethodScoreTable& table, const CorrelationSummary& summary) {
  const int width = 640, height = 480, margin = 60;
  std::vector<double> xs, ys;
  for (const auto& row : table.rows) {
    xs.push_back(row.metric_score);
    ys.push_back(summary.axis == "glicko" ? row.glicko : row.backproj.value_or(0.0));
  }
  double xmin = xs[0], xmax = xs[0], ymin = ys[0], ymax = ys[0];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xmin = std::min(xmin, xs[i]);
    xmax = std::max(xmax, xs[i]);
    ymin = std::min(ymin, ys[i]);
    ymax = std::max(ymax, ys[i]);
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin); };
  auto py = [&](double y) { return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
  svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(summary.fit.slope * xmin + summary.fit.intercept)
      << "\" x2=\"" << px(xmax) << "\" y2=\"" << py(summary.fit.slope * xmax + summary.fit.intercept)
      << "\" stroke=\"red\"/>\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    svg << "<circle cx=\"" << px(xs[i]) << "\" cy=\"" << py(ys[i]) << "\" r=\"4\" fill=\"blue\"/>\n";
    svg << "<text x=\"" << px(xs[i]) + 6 << "\" y=\"" << py(ys[i]) - 6 << "\" font-size=\"10\">"
        << table.rows[i].method_id << "</text>\n";
  }
  svg << "<text x=\"" << margin << "\" y=\"" << margin / 2 << "\" font-size=\"14\">metric vs "
      << summary.axis << " (pearson r = " << summary.pearson_r << ")</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace srdm
