#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "plotdig/geometry.hpp"
#include "plotdig/raster.hpp"

namespace plotdig {

enum class Orientation { Horizontal, Vertical };

// A detected straight line: a pixel row (horizontal) or column (vertical)
// with a half-open extent along it.
struct AxisLine {
    Orientation orientation = Orientation::Horizontal;
    int position = 0;
    int span_start = 0;
    int span_end = 0;

    bool operator==(const AxisLine&) const = default;
};

enum class AxisKind { X, Y };

struct Tick {
    AxisKind axis = AxisKind::X;
    int coordinate = 0;  // column for X ticks, row for Y ticks

    bool operator==(const Tick&) const = default;
};

struct Regions {
    BoundingBox data_region;
    std::optional<BoundingBox> x_label_region;
    std::optional<BoundingBox> y_label_region;
};

struct GraphLayout {
    AxisLine x_axis;
    AxisLine y_axis;
    std::optional<AxisLine> top_frame;
    std::optional<AxisLine> right_frame;
    BoundingBox data_region;
    std::optional<BoundingBox> x_label_region;
    std::optional<BoundingBox> y_label_region;
    std::vector<Tick> ticks;
    std::vector<AxisLine> grid_lines;
};

// Longest dark runs nearest the bottom/left periphery win; length must reach
// half the scanned dimension. Throws AxesNotFound when no run qualifies.
std::pair<AxisLine, AxisLine> detect_axes(const RasterImage& img);

// Optional top/right frame lines of a boxed plot, matched against the axis
// spans. first = top frame, second = right frame.
std::pair<std::optional<AxisLine>, std::optional<AxisLine>> detect_frames(
    const RasterImage& img, const std::pair<AxisLine, AxisLine>& axes);

// Small perpendicular marks on the outside of each axis whose coordinates
// form one arithmetic progression.
std::vector<Tick> detect_ticks(const RasterImage& img,
                               const std::pair<AxisLine, AxisLine>& axes);

// Light low-saturation lines crossing the data region at uniform intervals.
std::vector<AxisLine> detect_grid(const RasterImage& img,
                                  const std::pair<AxisLine, AxisLine>& axes);

Regions split_regions(const RasterImage& img, const std::pair<AxisLine, AxisLine>& axes);

// Runs the full rule-based stage: axes, frames, regions, ticks, grid.
GraphLayout analyze_layout(const RasterImage& img);

// Largest subset of coords (ascending) lying on some arithmetic progression
// within +/- tolerance of the anchored ideal positions. Subsets of size < 2
// are not considered progressions.
std::vector<int> largest_arithmetic_subset(const std::vector<int>& coords, int tolerance);

}  // namespace plotdig
