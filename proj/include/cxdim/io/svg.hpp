#pragma once

#include <complex>
#include <string>
#include <vector>

namespace cxdim::io {

struct ScatterPoint {
  double re = 0;
  double im = 0;
  int multiplicity = 1;
};

struct Step {
  double x = 0;
  double y = 0;
};

/// Two panels sharing the real axis: complex dimensions above (Im over
/// [0, period]) and the cumulative count of real parts below. Each circle
/// carries data-re / data-im with the exact printed coordinates. Dashed
/// markers at Re = D and Im = period (and period/2).
std::string scatter_staircase_svg(const std::vector<ScatterPoint>& points, const std::vector<Step>& staircase,
                                  double D, double period, const std::string& title);

/// Complex dimensions in a rectangular window with a dashed line at Re = D.
std::string scatter_svg(const std::vector<ScatterPoint>& points, double sigma_min, double sigma_max, double t_min,
                        double t_max, double D, const std::string& title);

/// Cumulative count of real parts as a step polyline, dashed marker at D.
std::string staircase_svg(const std::vector<Step>& steps, double D, const std::string& title);

/// One polyline.
std::string line_plot_svg(const std::vector<double>& x, const std::vector<double>& y, const std::string& title,
                          const std::string& x_label, const std::string& y_label, bool log_x = false);

}  // namespace cxdim::io
