#pragma once

#include <vector>

#include "plotdig/geometry.hpp"
#include "plotdig/raster.hpp"

namespace plotdig {

struct PixelPoint {
    int x = 0;
    int y = 0;
    Color color;

    bool operator==(const PixelPoint&) const = default;
};

// Neighborhood radius in RGB Euclidean distance and density floor.
struct DbscanParams {
    double eps = 25.0;
    int min_pts = 8;
};

struct LineCluster {
    int id = 0;
    Color representative_color;  // channel-wise mean of members, rounded
    std::vector<PixelPoint> members;
};

// All pixels of `region` that survive whitening (some channel < threshold).
std::vector<PixelPoint> collect_colored_pixels(const RasterImage& img, const BoundingBox& region,
                                               int whiten_threshold = 245);

// Derives per-image DBSCAN density settings from region size and the colored
// pixel ratio. eps stays fixed; min_pts scales with area, discounted for
// sparse images and capped at 5% of the point count.
DbscanParams calibrate_params(const std::vector<PixelPoint>& points, const BoundingBox& region);

// Density clustering over the RGB feature alone; pixel coordinates are not
// features. Noise is discarded unless assign_noise_to_nearest is set, in
// which case leftover points join the cluster with the closest mean color.
// Clusters come back sorted by descending member count.
std::vector<LineCluster> dbscan_cluster(const std::vector<PixelPoint>& points,
                                        const DbscanParams& params,
                                        bool assign_noise_to_nearest = false);

// Collapses a cluster to one point per pixel column: (column, mean row).
// Columns ascend; empty columns are skipped, never interpolated.
std::vector<PointXY> trace_series(const LineCluster& cluster, const BoundingBox& region);

}  // namespace plotdig
