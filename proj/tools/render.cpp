#include "render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "grenlab/stats.hpp"

namespace grenlab::cli {

std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins) {
  std::vector<HistogramBin> out;
  if (values.empty() || bins == 0) return out;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  if (*mn == *mx) {
    out.push_back({*mn - 0.5, *mn + 0.5, values.size()});
    return out;
  }
  const double width = (*mx - *mn) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out.push_back({*mn + width * static_cast<double>(b), *mn + width * static_cast<double>(b + 1), 0});
  }
  out.back().hi = *mx;
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - *mn) / width);
    ++out[std::min(b, bins - 1)].count;
  }
  return out;
}

double ks_critical_distance(std::size_t n, double alpha) {
  double lo = 0.0, hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_survival(mid) > alpha ? lo : hi) = mid;
  }
  const double rn = std::sqrt(static_cast<double>(n));
  return 0.5 * (lo + hi) / (rn + 0.12 + 0.11 / rn);
}

std::vector<QqPoint> normal_qq(std::vector<double> values, double alpha) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  std::vector<QqPoint> out;
  if (n == 0) return out;
  const double d = ks_critical_distance(n, alpha);
  const double inf = std::numeric_limits<double>::infinity();
  auto inv = [inf](double p) { return p <= 0.0 ? -inf : p >= 1.0 ? inf : normal_quantile(p); };
  const double nd = static_cast<double>(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double di = static_cast<double>(i);
    out.push_back({normal_quantile((di - 0.5) / nd), values[i - 1], inv(di / nd - d), inv((di - 1.0) / nd + d)});
  }
  return out;
}

namespace {

std::string f2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr double kPanelW = 420.0;
constexpr double kPanelH = 300.0;
constexpr double kMargin = 40.0;

struct Frame {
  double x0, y0;  // top-left corner of the panel
  double xmin, xmax, ymin, ymax;
  double px(double x) const { return x0 + kMargin + (x - xmin) / (xmax - xmin) * (kPanelW - 2 * kMargin); }
  double py(double y) const { return y0 + kPanelH - kMargin - (y - ymin) / (ymax - ymin) * (kPanelH - 2 * kMargin); }
};

void axes(std::ostringstream& s, const Frame& f, const std::string& title) {
  const double left = f.x0 + kMargin, right = f.x0 + kPanelW - kMargin;
  const double top = f.y0 + kMargin, bottom = f.y0 + kPanelH - kMargin;
  s << "<g class=\"axes\">\n";
  s << "<line x1=\"" << f2(left) << "\" y1=\"" << f2(bottom) << "\" x2=\"" << f2(right) << "\" y2=\"" << f2(bottom)
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << f2(left) << "\" y1=\"" << f2(top) << "\" x2=\"" << f2(left) << "\" y2=\"" << f2(bottom)
    << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << f2(left) << "\" y=\"" << f2(bottom + 16) << "\" font-size=\"11\">" << label(f.xmin) << "</text>\n";
  s << "<text x=\"" << f2(right) << "\" y=\"" << f2(bottom + 16) << "\" font-size=\"11\" text-anchor=\"end\">"
    << label(f.xmax) << "</text>\n";
  s << "<text x=\"" << f2(left - 4) << "\" y=\"" << f2(bottom) << "\" font-size=\"11\" text-anchor=\"end\">"
    << label(f.ymin) << "</text>\n";
  s << "<text x=\"" << f2(left - 4) << "\" y=\"" << f2(top + 8) << "\" font-size=\"11\" text-anchor=\"end\">"
    << label(f.ymax) << "</text>\n";
  s << "<text x=\"" << f2(f.x0 + kPanelW / 2) << "\" y=\"" << f2(f.y0 + 20)
    << "\" font-size=\"13\" text-anchor=\"middle\">" << escape(title) << "</text>\n";
  s << "</g>\n";
}

void no_data(std::ostringstream& s, double x0, double y0, const std::string& title) {
  axes(s, Frame{x0, y0, 0.0, 1.0, 0.0, 1.0}, title);
  s << "<text class=\"no-data\" x=\"" << f2(x0 + kPanelW / 2) << "\" y=\"" << f2(y0 + kPanelH / 2)
    << "\" font-size=\"14\" text-anchor=\"middle\">no data</text>\n";
}

void histogram_panel(std::ostringstream& s, double x0, double y0, const std::vector<double>& values, bool normal,
                     const std::string& title) {
  if (values.empty()) {
    no_data(s, x0, y0, title);
    return;
  }
  const std::size_t bins = std::clamp<std::size_t>(static_cast<std::size_t>(std::sqrt(values.size())), 1, 60);
  const auto h = histogram(values, bins);
  const double n = static_cast<double>(values.size());
  double xmin = h.front().lo, xmax = h.back().hi, ymax = 0.0;
  for (const auto& b : h) ymax = std::max(ymax, static_cast<double>(b.count) / (n * (b.hi - b.lo)));
  if (normal) {
    xmin = std::min(xmin, -4.0);
    xmax = std::max(xmax, 4.0);
    ymax = std::max(ymax, normal_pdf(0.0));
  }
  const Frame f{x0, y0, xmin, xmax, 0.0, ymax * 1.05};
  axes(s, f, title);
  s << "<g class=\"histogram\" fill=\"#8fb3d9\" stroke=\"#30577f\">\n";
  for (const auto& b : h) {
    const double density = static_cast<double>(b.count) / (n * (b.hi - b.lo));
    s << "<rect x=\"" << f2(f.px(b.lo)) << "\" y=\"" << f2(f.py(density)) << "\" width=\""
      << f2(f.px(b.hi) - f.px(b.lo)) << "\" height=\"" << f2(f.py(0.0) - f.py(density)) << "\"/>\n";
  }
  s << "</g>\n";
  if (normal) {
    s << "<polyline class=\"normal-density\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"";
    for (int i = 0; i <= 200; ++i) {
      const double x = xmin + (xmax - xmin) * i / 200.0;
      s << (i ? " " : "") << f2(f.px(x)) << "," << f2(f.py(normal_pdf(x)));
    }
    s << "\"/>\n";
  }
}

void qq_panel(std::ostringstream& s, double x0, double y0, const std::vector<double>& values,
              const std::string& title) {
  if (values.empty()) {
    no_data(s, x0, y0, title);
    return;
  }
  const auto qq = normal_qq(values);
  double lo = std::min(qq.front().theoretical, qq.front().observed);
  double hi = std::max(qq.back().theoretical, qq.back().observed);
  if (lo == hi) {
    lo -= 1.0;
    hi += 1.0;
  }
  const Frame f{x0, y0, lo, hi, lo, hi};
  axes(s, f, title);
  auto clip = [lo, hi](double y) { return std::clamp(y, lo, hi); };
  s << "<polyline class=\"ks-band-lo\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4,3\" points=\"";
  for (std::size_t i = 0; i < qq.size(); ++i) {
    s << (i ? " " : "") << f2(f.px(qq[i].theoretical)) << "," << f2(f.py(clip(qq[i].band_lo)));
  }
  s << "\"/>\n<polyline class=\"ks-band-hi\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4,3\" points=\"";
  for (std::size_t i = 0; i < qq.size(); ++i) {
    s << (i ? " " : "") << f2(f.px(qq[i].theoretical)) << "," << f2(f.py(clip(qq[i].band_hi)));
  }
  s << "\"/>\n";
  s << "<line class=\"identity\" x1=\"" << f2(f.px(lo)) << "\" y1=\"" << f2(f.py(lo)) << "\" x2=\"" << f2(f.px(hi))
    << "\" y2=\"" << f2(f.py(hi)) << "\" stroke=\"#c0392b\"/>\n";
  // At most about 2000 markers; the largest order statistic is always drawn.
  const std::size_t stride = std::max<std::size_t>(1, qq.size() / 2000);
  auto marker = [&](const QqPoint& p) {
    s << "<circle cx=\"" << f2(f.px(p.theoretical)) << "\" cy=\"" << f2(f.py(p.observed)) << "\" r=\"1.5\"/>\n";
  };
  s << "<g class=\"qq-points\" fill=\"#30577f\">\n";
  for (std::size_t i = 0; i < qq.size(); i += stride) marker(qq[i]);
  if ((qq.size() - 1) % stride != 0) marker(qq.back());
  s << "</g>\n";
}

}  // namespace

std::string render_svg(const ExperimentReport& report) {
  const bool standardized =
      report.config.mode == ExperimentMode::Plain || report.config.mode == ExperimentMode::Modified;
  const std::size_t rows = std::max<std::size_t>(1, report.stat.size());
  const double width = standardized ? 2 * kPanelW : kPanelW;
  const double height = kPanelH * static_cast<double>(rows) + 30.0;
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f2(width) << "\" height=\"" << f2(height)
    << "\" viewBox=\"0 0 " << f2(width) << " " << f2(height) << "\" font-family=\"sans-serif\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"10\" y=\"20\" font-size=\"14\">" << escape(mode_name(report.config.mode) + ": " + report.stat_label)
    << ", k = " << label(report.config.k) << "</text>\n";
  const std::string stat_name = report.stat_label.empty() ? "statistic" : report.stat_label;
  if (report.stat.empty()) {
    no_data(s, 0.0, 30.0, stat_name);
    if (standardized) no_data(s, kPanelW, 30.0, "normal QQ");
  }
  for (std::size_t i = 0; i < report.stat.size(); ++i) {
    const double y0 = 30.0 + kPanelH * static_cast<double>(i);
    const std::string n = i < report.config.n_grid.size() ? std::to_string(report.config.n_grid[i]) : "?";
    histogram_panel(s, 0.0, y0, report.stat[i], standardized, stat_name + ", n = " + n);
    if (standardized) qq_panel(s, kPanelW, y0, report.stat[i], "normal QQ with 99% KS band, n = " + n);
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace grenlab::cli
