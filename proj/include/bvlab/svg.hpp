#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bvlab/bv_core.hpp"

namespace bvlab {

/// One drawable layer: either a cell set (flat color) or a grid function
/// (per-cell opacity against the layer color).
struct SvgLayer {
  CellSet set;
  GridFunction function;
  bool is_function = false;
  std::string label;

  static SvgLayer from_set(CellSet s, std::string name = "") {
    SvgLayer l;
    l.set = std::move(s);
    l.label = std::move(name);
    return l;
  }
  static SvgLayer from_function(GridFunction f, std::string name = "") {
    SvgLayer l;
    l.function = std::move(f);
    l.is_function = true;
    l.label = std::move(name);
    return l;
  }
};

/// Deterministic cell raster: one rect per member cell per layer, fixed
/// palette and ordering, byte-identical output for identical inputs.
void emit_svg(const std::shared_ptr<const GridSpace>& space, const std::vector<SvgLayer>& layers,
              const std::string& path);

}  // namespace bvlab
