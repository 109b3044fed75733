#include "cxdim/io/svg.hpp"

#include "cxdim/io/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cxdim::io {
namespace {

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
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

// Maps a data range onto a pixel range.
struct Axis {
  double lo, hi, p0, p1;
  double operator()(double v) const { return hi == lo ? 0.5 * (p0 + p1) : p0 + (v - lo) / (hi - lo) * (p1 - p0); }
};

void pad(double& lo, double& hi) {
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
    return;
  }
  const double m = 0.05 * (hi - lo);
  lo -= m;
  hi += m;
}

const char* kHead =
    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\" "
    "font-family=\"sans-serif\" font-size=\"11\">\n"
    "<rect width=\"100%%\" height=\"100%%\" fill=\"white\"/>\n";

std::string head(int w, int h) {
  char buf[400];
  std::snprintf(buf, sizeof buf, kHead, w, h, w, h);
  return buf;
}

void frame(std::ostringstream& os, double x0, double y0, double x1, double y1) {
  os << "<rect x=\"" << px(x0) << "\" y=\"" << px(y0) << "\" width=\"" << px(x1 - x0) << "\" height=\""
     << px(y1 - y0) << "\" fill=\"none\" stroke=\"black\"/>\n";
}

void text(std::ostringstream& os, double x, double y, const std::string& s, const char* anchor = "middle") {
  os << "<text x=\"" << px(x) << "\" y=\"" << px(y) << "\" text-anchor=\"" << anchor << "\">" << escape(s)
     << "</text>\n";
}

void dashed(std::ostringstream& os, double x0, double y0, double x1, double y1, const char* colour) {
  os << "<line x1=\"" << px(x0) << "\" y1=\"" << px(y0) << "\" x2=\"" << px(x1) << "\" y2=\"" << px(y1)
     << "\" stroke=\"" << colour << "\" stroke-dasharray=\"4 3\"/>\n";
}

void circles(std::ostringstream& os, const std::vector<ScatterPoint>& points, const Axis& ax, const Axis& ay) {
  for (const auto& p : points) {
    os << "<circle cx=\"" << px(ax(p.re)) << "\" cy=\"" << px(ay(p.im)) << "\" r=\""
       << px(2.2 * p.multiplicity) << "\" fill=\"" << (p.multiplicity > 1 ? "crimson" : "navy")
       << "\" data-re=\"" << format_number(p.re) << "\" data-im=\"" << format_number(p.im) << "\" data-m=\""
       << p.multiplicity << "\"/>\n";
  }
}

void ticks_x(std::ostringstream& os, const Axis& ax, double y) {
  for (int i = 0; i <= 4; ++i) {
    const double v = ax.lo + (ax.hi - ax.lo) * i / 4.0;
    text(os, ax(v), y, format_number(std::round(v * 1000) / 1000));
  }
}

}  // namespace

std::string scatter_staircase_svg(const std::vector<ScatterPoint>& points, const std::vector<Step>& staircase,
                                  double D, double period, const std::string& title) {
  const int W = 420, H = 620;
  double lo = D, hi = D;
  for (const auto& p : points) {
    lo = std::min(lo, p.re);
    hi = std::max(hi, p.re);
  }
  pad(lo, hi);
  const Axis ax{lo, hi, 50, W - 20.0};
  const Axis ay{0, period, 440, 40};
  double count = 0;
  for (const auto& s : staircase) count = std::max(count, s.y);
  const Axis ac{0, std::max(count, 1.0), 590, 470};

  std::ostringstream os;
  os << head(W, H);
  text(os, W / 2.0, 20, title);
  frame(os, 50, 40, W - 20, 440);
  circles(os, points, ax, ay);
  dashed(os, ax(D), 40, ax(D), 440, "gray");
  dashed(os, 50, ay(period / 2), W - 20, ay(period / 2), "lightgray");
  text(os, ax(D), 454, "D");
  text(os, 44, ay(period) + 4, "p", "end");
  text(os, 44, ay(period / 2) + 4, "p/2", "end");
  text(os, 44, ay(0) + 4, "0", "end");

  frame(os, 50, 470, W - 20, 590);
  if (!staircase.empty()) {
    os << "<polyline fill=\"none\" stroke=\"navy\" points=\"" << px(ax(lo)) << "," << px(ac(0));
    double prev = 0;
    for (const auto& s : staircase) {
      os << " " << px(ax(s.x)) << "," << px(ac(prev)) << " " << px(ax(s.x)) << "," << px(ac(s.y));
      prev = s.y;
    }
    os << " " << px(ax(hi)) << "," << px(ac(prev)) << "\"/>\n";
  }
  dashed(os, ax(D), 470, ax(D), 590, "gray");
  text(os, 44, ac(count) + 4, format_number(count), "end");
  ticks_x(os, ax, 606);
  os << "</svg>\n";
  return os.str();
}

std::string scatter_svg(const std::vector<ScatterPoint>& points, double sigma_min, double sigma_max, double t_min,
                        double t_max, double D, const std::string& title) {
  const int W = 420, H = 520;
  const Axis ax{sigma_min, sigma_max, 50, W - 20.0};
  const Axis ay{t_min, t_max, 480, 40};
  std::ostringstream os;
  os << head(W, H);
  text(os, W / 2.0, 20, title);
  frame(os, 50, 40, W - 20, 480);
  circles(os, points, ax, ay);
  if (D >= sigma_min && D <= sigma_max) {
    dashed(os, ax(D), 40, ax(D), 480, "gray");
    text(os, ax(D), 34, "D");
  }
  text(os, 44, ay(t_max) + 4, format_number(t_max), "end");
  text(os, 44, ay(t_min) + 4, format_number(t_min), "end");
  ticks_x(os, ax, 496);
  os << "</svg>\n";
  return os.str();
}

std::string staircase_svg(const std::vector<Step>& steps, double D, const std::string& title) {
  std::vector<double> x, y;
  double prev = 0;
  for (const auto& s : steps) {
    x.push_back(s.x);
    y.push_back(prev);
    x.push_back(s.x);
    y.push_back(s.y);
    prev = s.y;
  }
  std::string svg = line_plot_svg(x, y, title, "Re", "count");
  if (x.empty()) return svg;
  // Marker at D on the same axis the line plot used.
  double x0 = *std::min_element(x.begin(), x.end()), x1 = *std::max_element(x.begin(), x.end());
  pad(x0, x1);
  const Axis ax{x0, x1, 60, 500};
  std::ostringstream os;
  dashed(os, ax(D), 40, ax(D), 310, "gray");
  text(os, ax(D), 34, "D");
  svg.insert(svg.rfind("</svg>"), os.str());
  return svg;
}

std::string line_plot_svg(const std::vector<double>& x, const std::vector<double>& y, const std::string& title,
                          const std::string& x_label, const std::string& y_label, bool log_x) {
  const int W = 520, H = 360;
  std::vector<double> xs = x;
  if (log_x)
    for (auto& v : xs) v = std::log10(v);
  double x0 = xs.empty() ? 0 : *std::min_element(xs.begin(), xs.end());
  double x1 = xs.empty() ? 1 : *std::max_element(xs.begin(), xs.end());
  double y0 = y.empty() ? 0 : *std::min_element(y.begin(), y.end());
  double y1 = y.empty() ? 1 : *std::max_element(y.begin(), y.end());
  pad(x0, x1);
  pad(y0, y1);
  const Axis ax{x0, x1, 60, W - 20.0};
  const Axis ay{y0, y1, 310, 40};
  std::ostringstream os;
  os << head(W, H);
  text(os, W / 2.0, 20, title);
  frame(os, 60, 40, W - 20, 310);
  os << "<polyline fill=\"none\" stroke=\"navy\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? " " : "") << px(ax(xs[i])) << "," << px(ay(y[i]));
  os << "\"/>\n";
  text(os, W / 2.0, 345, log_x ? "log10 " + x_label : x_label);
  text(os, 54, ay(y1) + 4, format_number(y1), "end");
  text(os, 54, ay(y0) + 4, format_number(y0), "end");
  text(os, 14, 175, y_label, "start");
  ticks_x(os, ax, 326);
  os << "</svg>\n";
  return os.str();
}

}  // namespace cxdim::io
