#include <doctest.h>

#include "plotdig/cleanup.hpp"
#include "plotdig/layout.hpp"
#include "plotdig/raster.hpp"

using namespace plotdig;

namespace {

int non_white_count(const RasterImage& img, const BoundingBox& region)
{
    int count = 0;
    for (int y = region.y_min; y < region.y_max; ++y) {
        for (int x = region.x_min; x < region.x_max; ++x) {
            if (img.at(x, y) != kWhite) {
                ++count;
            }
        }
    }
    return count;
}

// Axes at row 160 / column 40 on a 300x200 canvas, ticks below the x axis,
// gray grid columns crossing the data region.
RasterImage chart_scaffold(bool with_grid)
{
    RasterImage img(300, 200);
    for (int x = 0; x < 300; ++x) {
        img.set(x, 160, kBlack);
    }
    for (int y = 0; y < 200; ++y) {
        img.set(40, y, kBlack);
    }
    for (int col : {80, 120, 160, 200}) {
        for (int dy = 1; dy <= 4; ++dy) {
            img.set(col, 160 + dy, kBlack);
        }
        if (with_grid) {
            for (int y = 0; y < 160; ++y) {
                img.set(col, y, Color{228, 228, 228});
            }
        }
    }
    return img;
}

}  // namespace

TEST_SUITE("cleanup")
{
    TEST_CASE("erase_objects blanks exactly the boxed content")
    {
        RasterImage img(50, 30);
        for (int y = 10; y < 16; ++y) {
            for (int x = 10; x < 30; ++x) {
                img.set(x, y, Color{60, 60, 200});
            }
        }
        const std::vector<DetectedObject> dets = {
            {ObjectCategory::Legend, BoundingBox{10, 10, 30, 16}, 1.0, std::nullopt}};
        const RasterImage out = erase_objects(img, dets);
        CHECK(non_white_count(out, BoundingBox{0, 0, 50, 30}) == 0);
    }

    TEST_CASE("erase_objects takes a one pixel margin and clips at edges")
    {
        RasterImage img(20, 20, Color{200, 30, 30});
        const std::vector<DetectedObject> dets = {
            {ObjectCategory::Marker, BoundingBox{5, 5, 10, 10}, 1.0, std::nullopt},
            {ObjectCategory::Arrow, BoundingBox{0, 0, 3, 3}, 1.0, std::nullopt}};
        const RasterImage out = erase_objects(img, dets);
        CHECK(out.at(4, 4) == kWhite);   // margin pixel
        CHECK(out.at(10, 10) == kWhite); // margin past the half-open edge
        CHECK(out.at(3, 7) == Color{200, 30, 30});
        CHECK(out.at(0, 0) == kWhite);   // clipped box at the corner
        CHECK(out.at(11, 11) == Color{200, 30, 30});
    }

    TEST_CASE("erase_objects with no detections is the identity")
    {
        const RasterImage img = chart_scaffold(true);
        CHECK(erase_objects(img, {}) == img);
    }

    TEST_CASE("overlapping boxes erase the same as sequential erasure")
    {
        RasterImage img(30, 30, Color{10, 120, 10});
        const DetectedObject a{ObjectCategory::Text, BoundingBox{2, 2, 18, 18}, 1.0,
                               std::nullopt};
        const DetectedObject b{ObjectCategory::Text, BoundingBox{10, 10, 28, 28}, 1.0,
                               std::nullopt};
        const RasterImage both = erase_objects(img, {a, b});
        const RasterImage sequential = erase_objects(erase_objects(img, {a}), {b});
        CHECK(both == sequential);
        CHECK(erase_objects(both, {a, b}) == both);  // idempotent
    }

    TEST_CASE("erase_layout_artifacts leaves an artifact-only data region empty")
    {
        const RasterImage img = chart_scaffold(true);
        const GraphLayout layout = analyze_layout(img);
        const RasterImage out = erase_layout_artifacts(img, layout);
        CHECK(non_white_count(out, layout.data_region) == 0);
    }

    TEST_CASE("a data line survives cleanup except at grid crossings")
    {
        RasterImage img = chart_scaffold(true);
        const Color red{200, 30, 30};
        for (int x = 41; x < 300; ++x) {
            img.set(x, 100, red);  // horizontal data line over vertical grid
        }
        const GraphLayout layout = analyze_layout(img);
        const RasterImage out = erase_layout_artifacts(img, layout);

        int red_kept = 0, others = 0;
        for (int y = layout.data_region.y_min; y < layout.data_region.y_max; ++y) {
            for (int x = layout.data_region.x_min; x < layout.data_region.x_max; ++x) {
                if (out.at(x, y) == red) {
                    ++red_kept;
                } else if (out.at(x, y) != kWhite) {
                    ++others;
                }
            }
        }
        // The line spans 259 columns. Each erased line gets a 3 px band, so the
        // four grid crossings cost 3 px apiece and the y-axis band at column 40
        // reaches one pixel into the region (x = 41).
        CHECK(others == 0);  // every surviving pixel is the data line
        CHECK(red_kept == 259 - 4 * 3 - 1);
    }

    TEST_CASE("erase_layout_artifacts whitens near-white background and is idempotent")
    {
        RasterImage img = chart_scaffold(false);
        img.set(100, 50, Color{250, 250, 250});
        img.set(120, 50, Color{200, 30, 30});
        const GraphLayout layout = analyze_layout(img);
        const RasterImage once = erase_layout_artifacts(img, layout);
        CHECK(once.at(100, 50) == kWhite);
        CHECK(once.at(120, 50) == Color{200, 30, 30});
        CHECK(erase_layout_artifacts(once, layout) == once);
    }

    TEST_CASE("cleanup never increases the non-white pixel count")
    {
        const RasterImage img = chart_scaffold(true);
        const BoundingBox all{0, 0, img.width(), img.height()};
        const int before = non_white_count(img, all);
        const GraphLayout layout = analyze_layout(img);
        const RasterImage after = erase_layout_artifacts(img, layout);
        CHECK(non_white_count(after, all) <= before);
    }

    TEST_CASE("saturated pixels away from artifacts are never modified")
    {
        RasterImage img = chart_scaffold(true);
        const Color green{20, 180, 60};
        img.set(60, 30, green);
        img.set(250, 140, green);
        const GraphLayout layout = analyze_layout(img);
        const RasterImage out = erase_layout_artifacts(img, layout);
        CHECK(out.at(60, 30) == green);
        CHECK(out.at(250, 140) == green);
    }
}
