#pragma once

#include <memory>
#include <vector>

#include "bvlab/grid_space.hpp"

namespace bvlab {

/// Cells whose center lies in the closed axis-aligned box.
CellSet box_set(const std::shared_ptr<const GridSpace>& space, double x0, double x1, double y0,
                double y1);

/// Cells with center x-coordinate strictly below the threshold.
CellSet half_plane(const std::shared_ptr<const GridSpace>& space, double x_threshold);

CellSet single_cell(const std::shared_ptr<const GridSpace>& space, const Point& near);

/// The Example-5.9 rectangle chain A_j = [10^-j (1-eps), 10^-j] x [0, 10^-2j eps]
/// for j = 0..chain_depth, rasterized by cell centers.
CellSet ex59_chain(const std::shared_ptr<const GridSpace>& space, double eps, int chain_depth);

/// Continuum perimeter of the Example-5.9 chain (sum of rectangle perimeters),
/// for the solution-identity tolerance band.
double ex59_chain_perimeter(double eps, int chain_depth);

/// A dyadic chain of boxes hugging the parabola t = s^2/R toward the origin:
/// box_k = [rho_k - delta_k, rho_k] x [0, delta_k] with rho_k = R 2^-k and
/// delta_k = rho_k^2 / R, k = 1..depth; boxes that fall under the cell size
/// are dropped. Unlike the solid parabola region (whose radial projection
/// makes it 1-thick), this chain is 1-thin at the origin.
CellSet cusp_chain(const std::shared_ptr<const GridSpace>& space, double r, int depth);

/// Blob chain used by the strong Cartan experiment on weighted spaces: boxes
/// with explicitly chosen radii and sizes.
struct ChainBlob {
  double rho = 0.0;   // outer x-coordinate of the box
  double size_x = 0.0;
  double size_y = 0.0;
};
CellSet blob_chain(const std::shared_ptr<const GridSpace>& space,
                   const std::vector<ChainBlob>& blobs);

}  // namespace bvlab
