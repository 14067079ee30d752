#include "ddekoop/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "ddekoop/error.hpp"

namespace ddekoop {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 180.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Axes {
  double x0, x1, y0, y1;
  bool log_y;

  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const {
    const double v = log_y ? std::log10(y) : y;
    return kHeight - kBottom - (v - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
  }
};

void header(std::ostream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << esc(title) << "</text>\n";
}

void frame(std::ostream& os, const Axes& ax, const std::string& xlabel, const std::string& ylabel) {
  const double l = kLeft, r = kWidth - kRight, t = kTop, b = kHeight - kBottom;
  os << "<rect x=\"" << l << "\" y=\"" << t << "\" width=\"" << r - l << "\" height=\"" << b - t
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double x = ax.x0 + (ax.x1 - ax.x0) * i / 5.0;
    os << "<text x=\"" << num(ax.px(x)) << "\" y=\"" << num(b + 16) << "\" text-anchor=\"middle\">"
       << tick(x) << "</text>\n";
  }
  if (ax.log_y) {
    for (int e = static_cast<int>(std::ceil(ax.y0)); e <= static_cast<int>(std::floor(ax.y1)); ++e) {
      const double y = ax.py(std::pow(10.0, e));
      os << "<line x1=\"" << l << "\" x2=\"" << r << "\" y1=\"" << num(y) << "\" y2=\"" << num(y)
         << "\" stroke=\"#ddd\"/>\n<text x=\"" << l - 6 << "\" y=\"" << num(y + 4)
         << "\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
  } else {
    for (int i = 0; i <= 5; ++i) {
      const double v = ax.y0 + (ax.y1 - ax.y0) * i / 5.0;
      os << "<text x=\"" << l - 6 << "\" y=\"" << num(ax.py(v) + 4) << "\" text-anchor=\"end\">"
         << tick(v) << "</text>\n";
    }
  }
  os << "<text x=\"" << num((l + r) / 2) << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
     << esc(xlabel) << "</text>\n"
     << "<text transform=\"translate(16," << num((t + b) / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
     << esc(ylabel) << "</text>\n";
}

void legend(std::ostream& os, std::size_t i, const std::string& label, const char* color, bool dashed) {
  const double x = kWidth - kRight + 12;
  const double y = kTop + 14 + 16.0 * static_cast<double>(i);
  os << "<line x1=\"" << x << "\" x2=\"" << x + 20 << "\" y1=\"" << y << "\" y2=\"" << y << "\" stroke=\""
     << color << "\" stroke-width=\"2\"" << (dashed ? " stroke-dasharray=\"5,3\"" : "") << "/>\n"
     << "<text x=\"" << x + 26 << "\" y=\"" << y + 4 << "\">" << esc(label) << "</text>\n";
}

void polyline(std::ostream& os, const Axes& ax, const std::vector<double>& x, const std::vector<double>& y,
              const char* color, bool dashed) {
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
     << (dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
  for (std::size_t k = 0; k < x.size(); ++k) os << num(ax.px(x[k])) << ',' << num(ax.py(y[k])) << ' ';
  os << "\"/>\n";
}

std::ofstream open_svg(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  return os;
}

}  // namespace

void write_curves_svg(const std::string& path, const std::vector<ErrorCurve>& curves,
                      const std::string& title) {
  require(!curves.empty(), "no curves to plot");
  double tmax = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& c : curves) {
    tmax = std::max(tmax, c.t.empty() ? 0.0 : c.t.back());
    for (std::size_t k = 0; k < c.mu.size(); ++k) {
      if (c.min[k] > 0.0) lo = std::min(lo, c.min[k]);
      hi = std::max(hi, c.max[k]);
    }
  }
  if (!(hi > 0.0)) hi = 1.0;
  if (!std::isfinite(lo)) lo = hi / 10.0;
  const Axes ax{0.0, tmax > 0.0 ? tmax : 1.0, std::floor(std::log10(lo)), std::ceil(std::log10(hi)), true};
  auto clamp = [&](double v) { return std::max(v, std::pow(10.0, ax.y0)); };

  auto os = open_svg(path);
  header(os, title);
  frame(os, ax, "t", "mu (mean error over test trajectories)");
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const char* color = kPalette[i % std::size(kPalette)];
    // Band from the best to the worst test trajectory.
    os << "<polygon fill=\"" << color << "\" fill-opacity=\"0.12\" stroke=\"none\" points=\"";
    for (std::size_t k = 0; k < c.t.size(); ++k) os << num(ax.px(c.t[k])) << ',' << num(ax.py(clamp(c.max[k]))) << ' ';
    for (std::size_t k = c.t.size(); k-- > 0;) os << num(ax.px(c.t[k])) << ',' << num(ax.py(clamp(c.min[k]))) << ' ';
    os << "\"/>\n";
    std::vector<double> mu(c.mu.size());
    std::transform(c.mu.begin(), c.mu.end(), mu.begin(), clamp);
    polyline(os, ax, c.t, mu, color, false);
    legend(os, i, c.label, color, false);
  }
  os << "</svg>\n";
}

void write_current_value_svg(const std::string& path, const Eigen::MatrixXd& table,
                             const std::string& title) {
  require(table.rows() >= 2 && table.cols() >= 3, "current-value table is empty");
  const Eigen::Index n = (table.cols() - 1) / 2;
  const Eigen::MatrixXd values = table.rightCols(table.cols() - 1);
  double lo = values.minCoeff();
  double hi = values.maxCoeff();
  if (hi == lo) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  const Axes ax{table(0, 0), table(table.rows() - 1, 0), lo - pad, hi + pad, false};

  auto os = open_svg(path);
  header(os, title);
  frame(os, ax, "t", "current value x(t)");
  std::vector<double> t(table.col(0).data(), table.col(0).data() + table.rows());
  for (Eigen::Index c = 0; c < n; ++c) {
    const char* color = kPalette[static_cast<std::size_t>(c) % std::size(kPalette)];
    for (int which = 0; which < 2; ++which) {
      const Eigen::VectorXd col = table.col(1 + 2 * c + which);
      polyline(os, ax, t, std::vector<double>(col.data(), col.data() + col.size()), color, which == 1);
      legend(os, static_cast<std::size_t>(2 * c + which),
             "x" + std::to_string(c + 1) + (which ? " predicted" : " true"), color, which == 1);
    }
  }
  os << "</svg>\n";
}

}  // namespace ddekoop
