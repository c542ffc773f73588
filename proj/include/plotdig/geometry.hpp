#pragma once

#include <algorithm>
#include <cstdint>

namespace plotdig {

// Axis-aligned pixel box, half-open on both axes: [x_min, x_max) x [y_min, y_max).
struct BoundingBox {
    int x_min = 0;
    int y_min = 0;
    int x_max = 0;
    int y_max = 0;

    int width() const { return x_max - x_min; }
    int height() const { return y_max - y_min; }
    std::int64_t area() const { return std::int64_t(width()) * height(); }

    bool valid() const { return x_min >= 0 && y_min >= 0 && x_min < x_max && y_min < y_max; }

    bool contains(int x, int y) const { return x >= x_min && x < x_max && y >= y_min && y < y_max; }

    bool contains(const BoundingBox& other) const
    {
        return other.x_min >= x_min && other.x_max <= x_max && other.y_min >= y_min
            && other.y_max <= y_max;
    }

    double center_x() const { return 0.5 * (x_min + x_max); }
    double center_y() const { return 0.5 * (y_min + y_max); }

    bool operator==(const BoundingBox&) const = default;
};

inline BoundingBox intersect(const BoundingBox& a, const BoundingBox& b)
{
    return BoundingBox{std::max(a.x_min, b.x_min), std::max(a.y_min, b.y_min),
                       std::min(a.x_max, b.x_max), std::min(a.y_max, b.y_max)};
}

// Intersection area over union area; 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

// A generic 2-d point with real coordinates (pixel or value space).
struct PointXY {
    double x = 0;
    double y = 0;

    bool operator==(const PointXY&) const = default;
};

}  // namespace plotdig
