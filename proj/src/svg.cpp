#include "bvlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace bvlab {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#17becf", "#8c564b", "#7f7f7f"};
constexpr int kPaletteSize = 8;
constexpr double kCanvas = 640.0;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

void emit_svg(const std::shared_ptr<const GridSpace>& space, const std::vector<SvgLayer>& layers,
              const std::string& path) {
  const GridSpace& g = *space;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);

  double l = g.extent();
  double height = g.dim() == 1 ? kCanvas / 8.0 : kCanvas;
  auto px = [&](double x) { return (x + l) / (2.0 * l) * kCanvas; };
  auto py = [&](double y) {
    if (g.dim() == 1) return height / 2.0;
    return (l - y) / (2.0 * l) * kCanvas;
  };
  double cell_px = kCanvas / g.resolution();
  double cell_py = g.dim() == 1 ? height : cell_px;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kCanvas) << "\" height=\""
      << fmt(height) << "\" viewBox=\"0 0 " << fmt(kCanvas) << " " << fmt(height) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << fmt(kCanvas) << "\" height=\"" << fmt(height)
      << "\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

  for (std::size_t li = 0; li < layers.size(); ++li) {
    const SvgLayer& layer = layers[li];
    const char* color = kPalette[li % kPaletteSize];
    out << "<g fill=\"" << color << "\" fill-opacity=\"0.6\">\n";
    if (layer.is_function) {
      double vmax = 0.0;
      for (double v : layer.function.values()) vmax = std::max(vmax, std::fabs(v));
      if (vmax <= 0.0) vmax = 1.0;
      for (int c = 0; c < g.cell_count(); ++c) {
        double v = layer.function[c];
        if (v == 0.0) continue;
        Point p = g.center(c);
        out << "<rect x=\"" << fmt(px(p.x) - cell_px / 2.0) << "\" y=\""
            << fmt(g.dim() == 1 ? 0.0 : py(p.y) - cell_py / 2.0) << "\" width=\""
            << fmt(cell_px) << "\" height=\"" << fmt(cell_py) << "\" opacity=\""
            << fmt(std::fabs(v) / vmax) << "\"/>\n";
      }
    } else {
      for (int c = 0; c < g.cell_count(); ++c) {
        if (!layer.set.contains(c)) continue;
        Point p = g.center(c);
        out << "<rect x=\"" << fmt(px(p.x) - cell_px / 2.0) << "\" y=\""
            << fmt(g.dim() == 1 ? 0.0 : py(p.y) - cell_py / 2.0) << "\" width=\""
            << fmt(cell_px) << "\" height=\"" << fmt(cell_py) << "\"/>\n";
      }
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
}

}  // namespace bvlab
