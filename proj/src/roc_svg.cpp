#include "lingua/roc_svg.hpp"

#include <cstdio>
#include <sstream>

#include "lingua/error.hpp"

namespace lingua {

namespace {

constexpr double kSize = 400.0;
constexpr double kMargin = 50.0;
constexpr double kPlot = kSize - 2 * kMargin;

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

double px(double fpr) { return kMargin + fpr * kPlot; }
double py(double tpr) { return kSize - kMargin - tpr * kPlot; }

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
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

}  // namespace

std::string render_roc_svg(std::span<const RocCurve> curves, std::string_view title) {
  if (curves.empty()) throw ValidationError("no ROC curves to render");
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kSize << "\" height=\"" << kSize << "\" fill=\"white\"/>\n";
  if (!title.empty()) {
    svg << "<text x=\"" << kSize / 2 << "\" y=\"25\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(title) << "</text>\n";
  }

  // Axes and ticks as one path so the diagonal is the only <line>.
  svg << "<path d=\"M" << fixed(px(0)) << ' ' << fixed(py(1)) << " V" << fixed(py(0)) << " H"
      << fixed(px(1));
  for (int t = 0; t <= 5; ++t) {
    const double v = 0.2 * t;
    svg << " M" << fixed(px(v)) << ' ' << fixed(py(0)) << " v5";
    svg << " M" << fixed(px(0)) << ' ' << fixed(py(v)) << " h-5";
  }
  svg << "\" stroke=\"black\" fill=\"none\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double v = 0.2 * t;
    svg << "<text x=\"" << fixed(px(v)) << "\" y=\"" << fixed(py(0) + 18)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << fixed(v).substr(0, 3) << "</text>\n";
    svg << "<text x=\"" << fixed(px(0) - 8) << "\" y=\"" << fixed(py(v) + 3)
        << "\" text-anchor=\"end\" font-size=\"10\">" << fixed(v).substr(0, 3) << "</text>\n";
  }
  svg << "<text x=\"" << fixed(px(0.5)) << "\" y=\"" << fixed(kSize - 12)
      << "\" text-anchor=\"middle\" font-size=\"12\">False positive rate</text>\n";
  svg << "<text x=\"14\" y=\"" << fixed(py(0.5))
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 " << fixed(py(0.5))
      << ")\">True positive rate</text>\n";

  svg << "<line x1=\"" << fixed(px(0)) << "\" y1=\"" << fixed(py(0)) << "\" x2=\"" << fixed(px(1))
      << "\" y2=\"" << fixed(py(1)) << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const RocCurve& c = curves[i];
    svg << "<polyline fill=\"none\" stroke=\"" << escape(c.color) << "\" stroke-width=\"2\" points=\"";
    for (std::size_t p = 0; p < c.points.size(); ++p) {
      if (p) svg << ' ';
      svg << fixed(px(c.points[p].fpr)) << ',' << fixed(py(c.points[p].tpr));
    }
    svg << "\"/>\n";
    const double ly = py(0) - 12.0 - 16.0 * static_cast<double>(curves.size() - 1 - i);
    svg << "<text x=\"" << fixed(px(0.6)) << "\" y=\"" << fixed(ly) << "\" font-size=\"11\" fill=\""
        << escape(c.color) << "\">" << escape(c.name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace lingua
