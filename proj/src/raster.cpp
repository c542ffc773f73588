#include "plotdig/raster.hpp"

#include <cmath>
#include <stdexcept>

#include "plotdig/errors.hpp"

namespace plotdig {

double color_distance(Color a, Color b)
{
    const double dr = double(a.r) - double(b.r);
    const double dg = double(a.g) - double(b.g);
    const double db = double(a.b) - double(b.b);
    return std::sqrt(dr * dr + dg * dg + db * db);
}

RasterImage::RasterImage(int width, int height, Color fill) : width_(width), height_(height)
{
    if (width < 1 || height < 1) {
        throw std::invalid_argument("RasterImage dimensions must be positive");
    }
    pixels_.assign(std::size_t(width) * height, fill);
}

RasterImage crop(const RasterImage& img, const BoundingBox& box)
{
    if (!box.valid() || box.x_max > img.width() || box.y_max > img.height()) {
        throw OutOfBounds("crop box outside image bounds");
    }
    RasterImage out(box.width(), box.height());
    for (int y = box.y_min; y < box.y_max; ++y) {
        for (int x = box.x_min; x < box.x_max; ++x) {
            out.set(x - box.x_min, y - box.y_min, img.at(x, y));
        }
    }
    return out;
}

RasterImage whiten_background(const RasterImage& img, int threshold)
{
    RasterImage out = img;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const Color c = img.at(x, y);
            if (c.r >= threshold && c.g >= threshold && c.b >= threshold) {
                out.set(x, y, kWhite);
            }
        }
    }
    return out;
}

std::optional<Color> mean_ink_color(const RasterImage& img, const BoundingBox& box,
                                    int background_threshold)
{
    const BoundingBox clipped = intersect(box, {0, 0, img.width(), img.height()});
    if (clipped.x_min >= clipped.x_max || clipped.y_min >= clipped.y_max) {
        return std::nullopt;
    }
    std::int64_t sum_r = 0, sum_g = 0, sum_b = 0, count = 0;
    for (int y = clipped.y_min; y < clipped.y_max; ++y) {
        for (int x = clipped.x_min; x < clipped.x_max; ++x) {
            const Color c = img.at(x, y);
            if (c.r >= background_threshold && c.g >= background_threshold
                && c.b >= background_threshold) {
                continue;
            }
            sum_r += c.r;
            sum_g += c.g;
            sum_b += c.b;
            ++count;
        }
    }
    if (count == 0) {
        return std::nullopt;
    }
    auto mean = [count](std::int64_t sum) {
        return std::uint8_t((sum + count / 2) / count);
    };
    return Color{mean(sum_r), mean(sum_g), mean(sum_b)};
}

}  // namespace plotdig
