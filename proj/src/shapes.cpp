#include "bvlab/shapes.hpp"

#include <cmath>

namespace bvlab {

CellSet box_set(const std::shared_ptr<const GridSpace>& space, double x0, double x1, double y0,
                double y1) {
  const GridSpace& g = *space;
  CellSet s(space);
  for (int c = 0; c < g.cell_count(); ++c) {
    Point p = g.center(c);
    if (p.x < x0 || p.x > x1) continue;
    if (g.dim() == 2 && (p.y < y0 || p.y > y1)) continue;
    s.add(c);
  }
  return s;
}

CellSet half_plane(const std::shared_ptr<const GridSpace>& space, double x_threshold) {
  const GridSpace& g = *space;
  CellSet s(space);
  for (int c = 0; c < g.cell_count(); ++c) {
    if (g.center(c).x < x_threshold) s.add(c);
  }
  return s;
}

CellSet single_cell(const std::shared_ptr<const GridSpace>& space, const Point& near) {
  const GridSpace& g = *space;
  int best = 0;
  double best_d = 0.0;
  for (int c = 0; c < g.cell_count(); ++c) {
    double d = g.dist(c, near);
    if (c == 0 || d < best_d) {
      best = c;
      best_d = d;
    }
  }
  CellSet s(space);
  s.add(best);
  return s;
}

CellSet ex59_chain(const std::shared_ptr<const GridSpace>& space, double eps, int chain_depth) {
  if (!(eps > 0.0 && eps < 0.2)) throw InvalidArgument("ex59 chain needs eps in (0, 1/5)");
  if (chain_depth < 0) throw InvalidArgument("chain_depth must be >= 0");
  CellSet s(space);
  for (int j = 0; j <= chain_depth; ++j) {
    double scale = std::pow(10.0, -j);
    CellSet rect = box_set(space, scale - scale * eps, scale, 0.0, scale * scale * eps);
    s = s.set_union(rect);
  }
  return s;
}

double ex59_chain_perimeter(double eps, int chain_depth) {
  double p = 0.0;
  for (int j = 0; j <= chain_depth; ++j) {
    double scale = std::pow(10.0, -j);
    p += 2.0 * (scale * eps + scale * scale * eps);
  }
  return p;
}

CellSet cusp_chain(const std::shared_ptr<const GridSpace>& space, double r, int depth) {
  if (!(r > 0.0)) throw InvalidArgument("cusp chain needs a positive radius");
  const GridSpace& g = *space;
  CellSet s(space);
  for (int k = 1; k <= depth; ++k) {
    double rho = r * std::pow(2.0, -k);
    double delta = rho * rho / r;
    if (delta < g.spacing()) break;  // below cell size: the chain ends here
    s = s.set_union(box_set(space, rho - delta, rho, 0.0, delta));
  }
  return s;
}

CellSet blob_chain(const std::shared_ptr<const GridSpace>& space,
                   const std::vector<ChainBlob>& blobs) {
  CellSet s(space);
  for (const ChainBlob& b : blobs) {
    s = s.set_union(box_set(space, b.rho - b.size_x, b.rho, 0.0, b.size_y));
  }
  return s;
}

}  // namespace bvlab
