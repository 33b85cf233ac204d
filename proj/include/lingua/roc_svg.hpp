#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lingua/metrics.hpp"

namespace lingua {

struct RocCurve {
  std::string name;
  std::vector<RocPoint> points;
  std::string color;  // any SVG color; "magenta" for SVM and "blue" for the forest by convention
};

/// Fixed-size SVG plot: one polyline per curve, a gray dashed chance
/// diagonal, axes from 0 to 1 with ticks every 0.2. The x axis is the false
/// positive rate. Output is byte-stable for identical input.
std::string render_roc_svg(std::span<const RocCurve> curves, std::string_view title = {});

}  // namespace lingua
