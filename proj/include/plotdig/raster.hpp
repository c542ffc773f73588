#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "plotdig/geometry.hpp"

namespace plotdig {

struct Color {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Color&) const = default;
};

inline constexpr Color kWhite{255, 255, 255};
inline constexpr Color kBlack{0, 0, 0};

// Rec.601 luma, integer arithmetic, range [0, 255].
inline int luma(Color c)
{
    return (299 * c.r + 587 * c.g + 114 * c.b) / 1000;
}

// Spread between the largest and smallest channel; 0 for pure grays.
inline int saturation_span(Color c)
{
    const int hi = std::max({int(c.r), int(c.g), int(c.b)});
    const int lo = std::min({int(c.r), int(c.g), int(c.b)});
    return hi - lo;
}

double color_distance(Color a, Color b);

// Owned RGB pixel grid, row-major. Immutable in pipeline use; stages produce
// transformed copies.
class RasterImage {
public:
    RasterImage(int width, int height, Color fill = kWhite);

    int width() const { return width_; }
    int height() const { return height_; }

    Color at(int x, int y) const { return pixels_[std::size_t(y) * width_ + x]; }
    void set(int x, int y, Color c) { pixels_[std::size_t(y) * width_ + x] = c; }

    const std::vector<Color>& pixels() const { return pixels_; }

    bool operator==(const RasterImage&) const = default;

private:
    int width_;
    int height_;
    std::vector<Color> pixels_;
};

// New image holding exactly the boxed pixels; the source is untouched.
RasterImage crop(const RasterImage& img, const BoundingBox& box);

// Pixels whose three channels are all >= threshold become pure white.
RasterImage whiten_background(const RasterImage& img, int threshold);

// Mean color of the pixels in `box` that are not background-white (some
// channel < background_threshold). Empty when the box is all background.
std::optional<Color> mean_ink_color(const RasterImage& img, const BoundingBox& box,
                                    int background_threshold = 245);

}  // namespace plotdig
