#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace tailrisk::cli::svg {
namespace {

constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
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
  char buf[32];
  if (v != 0.0 && (std::abs(v) >= 1e5 || std::abs(v) < 1e-3)) std::snprintf(buf, sizeof buf, "%.0e", v);
  else std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Scale {
  double lo, hi;
  bool log;
  double px_lo, px_hi;

  double map(double v) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double t = ((log ? std::log10(v) : v) - a) / (b - a);
    return px_lo + t * (px_hi - px_lo);
  }
};

void extend(double v, bool log, double& lo, double& hi) {
  if (!std::isfinite(v) || (log && v <= 0.0)) return;
  lo = std::min(lo, v);
  hi = std::max(hi, v);
}

// Data range, widened to whole decades on log axes and padded on linear ones.
std::pair<double, double> fit_range(const Axis& axis, double lo, double hi) {
  if (!(lo <= hi)) {
    lo = axis.log ? 1.0 : 0.0;
    hi = axis.log ? 10.0 : 1.0;
  }
  if (axis.log) {
    lo = std::pow(10.0, std::floor(std::log10(lo)));
    hi = std::pow(10.0, std::ceil(std::log10(hi)));
    if (hi <= lo) hi = lo * 10.0;
  } else {
    if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {axis.lo.value_or(lo), axis.hi.value_or(hi)};
}

std::vector<double> ticks(double lo, double hi, bool log) {
  std::vector<double> out;
  if (log) {
    for (double e = std::ceil(std::log10(lo) - 1e-9); e <= std::log10(hi) + 1e-9; e += 1.0) out.push_back(std::pow(10.0, e));
    return out;
  }
  const double raw = (hi - lo) / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return out;
}

std::string path_data(const std::vector<Point>& pts, const Scale& sx, const Scale& sy) {
  std::string d;
  bool pen_down = false;
  for (const auto& p : pts) {
    const bool ok = std::isfinite(p.x) && std::isfinite(p.y) && (!sx.log || p.x > 0) && (!sy.log || p.y > 0);
    if (!ok) {
      pen_down = false;
      continue;
    }
    d += pen_down ? " L" : (d.empty() ? "M" : " M");
    d += fmt(sx.map(p.x)) + "," + fmt(sy.map(p.y));
    pen_down = true;
  }
  return d;
}

}  // namespace

std::string render(const Figure& f) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double xlo = inf, xhi = -inf, ylo = inf, yhi = -inf;
  for (const auto& l : f.lines) {
    for (const auto& p : l.points) {
      extend(p.x, f.x.log, xlo, xhi);
      extend(p.y, f.y.log, ylo, yhi);
    }
  }
  for (const auto& m : f.markers) {
    for (const auto& p : m.points) {
      extend(p.x, f.x.log, xlo, xhi);
      extend(p.y, f.y.log, ylo, yhi);
    }
  }
  for (const auto& b : f.bands) {
    for (std::size_t i = 0; i < b.x.size(); ++i) {
      extend(b.x[i], f.x.log, xlo, xhi);
      extend(b.lo[i], f.y.log, ylo, yhi);
      extend(b.hi[i], f.y.log, ylo, yhi);
    }
  }
  for (const auto& b : f.bars) {
    for (std::size_t i = 0; i < b.left.size(); ++i) {
      extend(b.left[i], f.x.log, xlo, xhi);
      extend(b.right[i], f.x.log, xlo, xhi);
      extend(b.height[i], f.y.log, ylo, yhi);
    }
    if (!f.y.log) extend(0.0, false, ylo, yhi);
  }
  for (const auto& r : f.refs) extend(r.value, r.horizontal ? f.y.log : f.x.log, r.horizontal ? ylo : xlo, r.horizontal ? yhi : xhi);

  const auto [x0, x1] = fit_range(f.x, xlo, xhi);
  const auto [y0, y1] = fit_range(f.y, ylo, yhi);
  const double W = f.width, H = f.height;
  const Scale sx{x0, x1, f.x.log, kLeft, W - kRight};
  const Scale sy{y0, y1, f.y.log, H - kBottom, kTop};

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(f.width) + "\" height=\"" +
       std::to_string(f.height) + "\" viewBox=\"0 0 " + std::to_string(f.width) + " " + std::to_string(f.height) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<defs><clipPath id=\"plot\"><rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" +
       fmt(W - kLeft - kRight) + "\" height=\"" + fmt(H - kTop - kBottom) + "\"/></clipPath></defs>\n";
  s += "<text x=\"" + fmt(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(f.title) + "</text>\n";

  // Axes, ticks and grid.
  s += "<g stroke=\"#000\" fill=\"none\"><rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" +
       fmt(W - kLeft - kRight) + "\" height=\"" + fmt(H - kTop - kBottom) + "\"/></g>\n";
  for (double t : ticks(x0, x1, f.x.log)) {
    const double px = sx.map(t);
    s += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(px) + "\" y2=\"" + fmt(H - kBottom) +
         "\" stroke=\"#eee\"/>\n";
    s += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(H - kBottom + 16) + "\" text-anchor=\"middle\">" + tick_label(t) +
         "</text>\n";
  }
  for (double t : ticks(y0, y1, f.y.log)) {
    const double py = sy.map(t);
    s += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(py) + "\" x2=\"" + fmt(W - kRight) + "\" y2=\"" + fmt(py) +
         "\" stroke=\"#eee\"/>\n";
    s += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(py + 4) + "\" text-anchor=\"end\">" + tick_label(t) +
         "</text>\n";
  }
  s += "<text x=\"" + fmt((kLeft + W - kRight) / 2) + "\" y=\"" + fmt(H - 18) + "\" text-anchor=\"middle\">" +
       escape(f.x.label) + "</text>\n";
  s += "<text transform=\"translate(18," + fmt((kTop + H - kBottom) / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">" + escape(f.y.label) + "</text>\n";

  s += "<g clip-path=\"url(#plot)\">\n";
  for (const auto& b : f.bands) {
    std::vector<Point> outline;
    for (std::size_t i = 0; i < b.x.size(); ++i) outline.push_back({b.x[i], b.hi[i]});
    for (std::size_t i = b.x.size(); i-- > 0;) outline.push_back({b.x[i], b.lo[i]});
    s += "<path d=\"" + path_data(outline, sx, sy) + " Z\" fill=\"" + b.color + "\" stroke=\"none\"/>\n";
  }
  for (const auto& b : f.bars) {
    for (std::size_t i = 0; i < b.left.size(); ++i) {
      const double base = f.y.log ? y0 : std::max(y0, 0.0);
      if (f.y.log && !(b.height[i] > 0)) continue;
      const double px0 = sx.map(b.left[i]), px1 = sx.map(b.right[i]);
      const double py0 = sy.map(b.height[i]), py1 = sy.map(base);
      s += "<rect x=\"" + fmt(px0) + "\" y=\"" + fmt(py0) + "\" width=\"" + fmt(px1 - px0) + "\" height=\"" +
           fmt(py1 - py0) + "\" fill=\"" + b.color + "\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
    }
  }
  for (const auto& l : f.lines) {
    const auto d = path_data(l.points, sx, sy);
    if (d.empty()) continue;
    s += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + l.color + "\" stroke-width=\"" + fmt(l.width) + "\"" +
         (l.dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
  }
  for (const auto& m : f.markers) {
    s += "<g fill=\"" + m.color + "\">\n";
    for (const auto& p : m.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || (sx.log && p.x <= 0) || (sy.log && p.y <= 0)) continue;
      s += "<circle cx=\"" + fmt(sx.map(p.x)) + "\" cy=\"" + fmt(sy.map(p.y)) + "\" r=\"" + fmt(m.radius) + "\"/>\n";
    }
    s += "</g>\n";
  }
  for (const auto& r : f.refs) {
    if (r.horizontal) {
      const double py = sy.map(r.value);
      s += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(py) + "\" x2=\"" + fmt(W - kRight) + "\" y2=\"" + fmt(py) +
           "\" stroke=\"" + r.color + "\" stroke-dasharray=\"4,4\"/>\n";
      s += "<text x=\"" + fmt(W - kRight - 4) + "\" y=\"" + fmt(py - 4) + "\" text-anchor=\"end\">" +
           escape(r.label) + "</text>\n";
    } else {
      const double px = sx.map(r.value);
      s += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(px) + "\" y2=\"" + fmt(H - kBottom) +
           "\" stroke=\"" + r.color + "\" stroke-dasharray=\"4,4\"/>\n";
      s += "<text x=\"" + fmt(px + 4) + "\" y=\"" + fmt(kTop + 14) + "\">" + escape(r.label) + "</text>\n";
    }
  }
  s += "</g>\n";

  // Legend, top right.
  std::vector<std::pair<std::string, std::string>> legend;
  for (const auto& b : f.bands) if (!b.legend.empty()) legend.emplace_back(b.legend, b.color);
  for (const auto& l : f.lines) if (!l.legend.empty()) legend.emplace_back(l.legend, l.color);
  for (const auto& m : f.markers) if (!m.legend.empty()) legend.emplace_back(m.legend, m.color);
  double ly = kTop + 16;
  for (const auto& [text, color] : legend) {
    s += "<rect x=\"" + fmt(W - kRight - 170) + "\" y=\"" + fmt(ly - 9) + "\" width=\"12\" height=\"10\" fill=\"" +
         color + "\"/>\n";
    s += "<text x=\"" + fmt(W - kRight - 152) + "\" y=\"" + fmt(ly) + "\">" + escape(text) + "</text>\n";
    ly += 16;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace tailrisk::cli::svg
