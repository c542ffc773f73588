#pragma once

#include <vector>

#include "plotdig/detect.hpp"
#include "plotdig/layout.hpp"
#include "plotdig/raster.hpp"

namespace plotdig {

// Paints every detection box white, expanded by a 1 px margin and clipped to
// the image. Detections must be in-graph categories.
RasterImage erase_objects(const RasterImage& img, const std::vector<DetectedObject>& detections);

// Paints axes, frame lines, ticks, and grid lines white, sweeps leftover
// light-gray pixels (interrupted grid fragments), then whitens the background
// at `whiten_threshold`. Leaves only the data lines behind.
RasterImage erase_layout_artifacts(const RasterImage& img, const GraphLayout& layout,
                                   int whiten_threshold = 245);

}  // namespace plotdig
