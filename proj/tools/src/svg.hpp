#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tailrisk::cli::svg {

struct Point {
  double x;
  double y;
};

struct Axis {
  std::string label;
  bool log = false;
  /// Fixed range; otherwise fitted to the data.
  std::optional<double> lo, hi;
};

struct Line {
  std::vector<Point> points;
  std::string color = "#000000";
  double width = 1.5;
  bool dashed = false;
  std::string legend;
};

struct Markers {
  std::vector<Point> points;
  std::string color = "#000000";
  double radius = 2.0;
  std::string legend;
};

/// Filled region between two curves sharing x values.
struct Band {
  std::vector<double> x;
  std::vector<double> lo;
  std::vector<double> hi;
  std::string color = "#bbbbbb";
  std::string legend;
};

/// Histogram bars [left, right) x height.
struct Bars {
  std::vector<double> left;
  std::vector<double> right;
  std::vector<double> height;
  std::string color = "#777777";
};

struct RefLine {
  double value;
  bool horizontal = true;
  std::string label;
  std::string color = "#444444";
};

struct Figure {
  std::string title;
  Axis x;
  Axis y;
  std::vector<Band> bands;
  std::vector<Bars> bars;
  std::vector<Line> lines;
  std::vector<Markers> markers;
  std::vector<RefLine> refs;
  int width = 720;
  int height = 480;
};

/// Deterministic SVG text: coordinates are printed with fixed precision and
/// nothing depends on time or environment.
std::string render(const Figure& figure);

}  // namespace tailrisk::cli::svg
