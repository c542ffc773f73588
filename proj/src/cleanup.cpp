#include "plotdig/cleanup.hpp"

#include <algorithm>
#include <cmath>

#include "plotdig/errors.hpp"

namespace plotdig {

namespace {

void fill_white(RasterImage& img, const BoundingBox& box)
{
    const BoundingBox clipped = intersect(box, {0, 0, img.width(), img.height()});
    for (int y = clipped.y_min; y < clipped.y_max; ++y) {
        for (int x = clipped.x_min; x < clipped.x_max; ++x) {
            img.set(x, y, kWhite);
        }
    }
}

// A 3 px band centered on the line position, over its span.
BoundingBox line_band(const AxisLine& line)
{
    if (line.orientation == Orientation::Horizontal) {
        return BoundingBox{line.span_start, line.position - 1, line.span_end, line.position + 2};
    }
    return BoundingBox{line.position - 1, line.span_start, line.position + 2, line.span_end};
}

}  // namespace

RasterImage erase_objects(const RasterImage& img, const std::vector<DetectedObject>& detections)
{
    RasterImage out = img;
    for (const auto& det : detections) {
        if (is_subfigure_category(det.category)) {
            throw MalformedAnnotation("erase_objects given a subfigure category");
        }
        fill_white(out, BoundingBox{det.box.x_min - 1, det.box.y_min - 1, det.box.x_max + 1,
                                    det.box.y_max + 1});
    }
    return out;
}

RasterImage erase_layout_artifacts(const RasterImage& img, const GraphLayout& layout,
                                   int whiten_threshold)
{
    RasterImage out = img;

    fill_white(out, line_band(layout.x_axis));
    fill_white(out, line_band(layout.y_axis));
    if (layout.top_frame) {
        fill_white(out, line_band(*layout.top_frame));
    }
    if (layout.right_frame) {
        fill_white(out, line_band(*layout.right_frame));
    }

    const double scale = std::max(img.width(), img.height()) / 640.0;
    const int tick_reach = std::max(3, int(std::lround(13 * scale)));
    for (const Tick& tick : layout.ticks) {
        if (tick.axis == AxisKind::X) {
            const int row = layout.x_axis.position;
            fill_white(out, BoundingBox{tick.coordinate - 2, row - 1, tick.coordinate + 3,
                                        std::min(img.height(), row + tick_reach)});
        } else {
            const int col = layout.y_axis.position;
            fill_white(out, BoundingBox{std::max(0, col - tick_reach), tick.coordinate - 2,
                                        col + 2, tick.coordinate + 3});
        }
    }

    for (const AxisLine& grid : layout.grid_lines) {
        fill_white(out, line_band(grid));
    }

    // Grid fragments interrupted by a legend or inset escape line detection;
    // sweep any remaining light gray so only data ink survives.
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            const Color c = out.at(x, y);
            if (c != kWhite && saturation_span(c) <= 20 && luma(c) >= 128) {
                out.set(x, y, kWhite);
            }
        }
    }

    return whiten_background(out, whiten_threshold);
}

}  // namespace plotdig
