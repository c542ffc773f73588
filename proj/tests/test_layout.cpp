#include <doctest.h>

#include <algorithm>
#include <cstdlib>

#include "plotdig/errors.hpp"
#include "plotdig/layout.hpp"
#include "plotdig/synth.hpp"

using namespace plotdig;

namespace {

// 300x200 canvas with a full-width dark row and full-height dark column.
RasterImage plain_axes_image(int axis_row = 160, int axis_col = 40)
{
    RasterImage img(300, 200);
    for (int x = 0; x < img.width(); ++x) {
        img.set(x, axis_row, kBlack);
    }
    for (int y = 0; y < img.height(); ++y) {
        img.set(axis_col, y, kBlack);
    }
    return img;
}

std::vector<int> x_tick_coords(const std::vector<Tick>& ticks)
{
    std::vector<int> out;
    for (const Tick& t : ticks) {
        if (t.axis == AxisKind::X) {
            out.push_back(t.coordinate);
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("layout")
{
    TEST_CASE("detect_axes finds single full-length lines exactly")
    {
        const auto [x_axis, y_axis] = detect_axes(plain_axes_image());
        CHECK(x_axis.position == 160);
        CHECK(x_axis.orientation == Orientation::Horizontal);
        CHECK(x_axis.span_start == 0);
        CHECK(x_axis.span_end == 300);
        CHECK(y_axis.position == 40);
        CHECK(y_axis.orientation == Orientation::Vertical);
        CHECK(y_axis.span_end == 200);
    }

    TEST_CASE("detect_axes throws on a blank image")
    {
        CHECK_THROWS_AS(detect_axes(RasterImage(100, 100)), AxesNotFound);
    }

    TEST_CASE("periphery wins between equal-length rows")
    {
        RasterImage img(300, 200);
        for (int x = 0; x < 300; ++x) {
            img.set(x, 100, kBlack);
            img.set(x, 160, kBlack);
        }
        for (int y = 0; y < 200; ++y) {
            img.set(40, y, kBlack);
        }
        CHECK(detect_axes(img).first.position == 160);
    }

    TEST_CASE("a much longer run beats a slightly more peripheral one")
    {
        RasterImage img(300, 200);
        for (int x = 0; x < 300; ++x) {
            img.set(x, 150, kBlack);  // full width
        }
        for (int x = 0; x < 150; ++x) {
            img.set(x, 199, kBlack);  // half width at the very bottom
        }
        for (int y = 0; y < 200; ++y) {
            img.set(40, y, kBlack);
        }
        // Scores: 300 - 2*49 = 202 vs 150 - 0 = 150.
        CHECK(detect_axes(img).first.position == 150);
    }

    TEST_CASE("split_regions partitions a plain chart")
    {
        const RasterImage img = plain_axes_image();
        const Regions regions = split_regions(img, detect_axes(img));
        CHECK(regions.data_region == BoundingBox{41, 0, 300, 160});
        REQUIRE(regions.x_label_region.has_value());
        CHECK(*regions.x_label_region == BoundingBox{0, 161, 300, 200});
        REQUIRE(regions.y_label_region.has_value());
        CHECK(*regions.y_label_region == BoundingBox{0, 0, 40, 160});

        // Pairwise disjoint.
        CHECK_FALSE(intersect(regions.data_region, *regions.x_label_region).valid());
        CHECK_FALSE(intersect(regions.data_region, *regions.y_label_region).valid());
        CHECK_FALSE(intersect(*regions.x_label_region, *regions.y_label_region).valid());
    }

    TEST_CASE("split_regions drops zero-height label bands but keeps the data region")
    {
        const RasterImage img = plain_axes_image(199, 0);
        const Regions regions = split_regions(img, detect_axes(img));
        CHECK(regions.data_region == BoundingBox{1, 0, 300, 199});
        CHECK_FALSE(regions.x_label_region.has_value());
        CHECK_FALSE(regions.y_label_region.has_value());
    }

    TEST_CASE("split_regions throws when the axes leave no data area")
    {
        RasterImage img(300, 200);
        for (int x = 0; x < 300; ++x) {
            img.set(x, 0, kBlack);  // x axis at the top row
        }
        for (int y = 0; y < 200; ++y) {
            img.set(40, y, kBlack);
        }
        const AxisLine x_axis{Orientation::Horizontal, 0, 0, 300};
        const AxisLine y_axis{Orientation::Vertical, 40, 0, 200};
        CHECK_THROWS_AS(split_regions(img, {x_axis, y_axis}), DegenerateRegion);
    }

    TEST_CASE("frame lines bound the data region and are excluded from it")
    {
        RasterImage img(300, 200);
        for (int x = 40; x < 300; ++x) {
            img.set(x, 160, kBlack);
            img.set(x, 0, kBlack);  // top frame
        }
        for (int y = 0; y <= 160; ++y) {
            img.set(40, y, kBlack);
            img.set(299, y, kBlack);  // right frame
        }
        const auto axes = detect_axes(img);
        CHECK(axes.first.position == 160);
        CHECK(axes.second.position == 40);
        const auto [top, right] = detect_frames(img, axes);
        REQUIRE(top.has_value());
        CHECK(top->position == 0);
        REQUIRE(right.has_value());
        CHECK(right->position == 299);
        CHECK(split_regions(img, axes).data_region == BoundingBox{41, 1, 299, 160});
    }

    TEST_CASE("no frames detected on an unframed chart")
    {
        const auto [top, right] = detect_frames(plain_axes_image(),
                                                detect_axes(plain_axes_image()));
        CHECK_FALSE(top.has_value());
        CHECK_FALSE(right.has_value());
    }

    TEST_CASE("detect_ticks reads evenly spaced marks below the x axis")
    {
        RasterImage img = plain_axes_image();
        for (int col : {50, 100, 150, 200}) {
            for (int dy = 1; dy <= 4; ++dy) {
                img.set(col, 160 + dy, kBlack);
            }
        }
        const auto ticks = detect_ticks(img, detect_axes(img));
        CHECK(x_tick_coords(ticks) == std::vector<int>{50, 100, 150, 200});
    }

    TEST_CASE("detect_ticks keeps only a progression-consistent subset")
    {
        RasterImage img = plain_axes_image();
        for (int col : {50, 100, 237}) {
            for (int dy = 1; dy <= 4; ++dy) {
                img.set(col, 160 + dy, kBlack);
            }
        }
        const auto ticks = detect_ticks(img, detect_axes(img));
        CHECK(x_tick_coords(ticks) == std::vector<int>{50, 100});
    }

    TEST_CASE("detect_ticks returns nothing for a bare axis")
    {
        const RasterImage img = plain_axes_image();
        CHECK(detect_ticks(img, detect_axes(img)).empty());
    }

    TEST_CASE("detect_grid recovers uniformly spaced gray rows")
    {
        RasterImage img = plain_axes_image();
        const Color gray{228, 228, 228};
        for (int row : {40, 80, 120}) {
            for (int x = 41; x < 300; ++x) {
                img.set(x, row, gray);
            }
        }
        const auto grid = detect_grid(img, detect_axes(img));
        REQUIRE(grid.size() == 3);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(grid[i].orientation == Orientation::Horizontal);
            CHECK(grid[i].position == 40 + 40 * int(i));
            CHECK(grid[i].span_start == 41);
            CHECK(grid[i].span_end == 300);
        }
    }

    TEST_CASE("a lone gray line is not a grid")
    {
        RasterImage img = plain_axes_image();
        for (int x = 41; x < 300; ++x) {
            img.set(x, 80, Color{228, 228, 228});
        }
        CHECK(detect_grid(img, detect_axes(img)).empty());
    }

    TEST_CASE("no grid on a clean chart")
    {
        const RasterImage img = plain_axes_image();
        CHECK(detect_grid(img, detect_axes(img)).empty());
    }

    TEST_CASE("largest_arithmetic_subset fixtures")
    {
        // Three size-2 candidates; the smallest step wins the tie.
        CHECK(largest_arithmetic_subset({50, 100, 237}, 2) == std::vector<int>{50, 100});
        CHECK(largest_arithmetic_subset({10, 20, 30, 40}, 2)
              == std::vector<int>{10, 20, 30, 40});
        CHECK(largest_arithmetic_subset({10, 20, 31, 40}, 2)
              == std::vector<int>{10, 20, 31, 40});  // within +/-2 of the ideal
        CHECK(largest_arithmetic_subset({10, 20, 30, 55}, 2) == std::vector<int>{10, 20, 30});
        CHECK(largest_arithmetic_subset({}, 2).empty());
        CHECK(largest_arithmetic_subset({7}, 2).empty());
        // Equal size and step: the progression starting earlier wins.
        CHECK(largest_arithmetic_subset({10, 20, 50, 60}, 2) == std::vector<int>{10, 20});
    }

    TEST_CASE("analyze_layout matches generator ground truth on framed charts")
    {
        ChartSpec spec = random_chart_spec(11);
        spec.frame = true;
        spec.grid = true;
        const auto [img, truth] = generate_chart(spec);
        const GraphLayout layout = analyze_layout(img);

        CHECK(layout.x_axis.position == truth.layout.x_axis.position);
        CHECK(layout.y_axis.position == truth.layout.y_axis.position);
        CHECK(layout.data_region == truth.layout.data_region);
        REQUIRE(layout.top_frame.has_value());
        CHECK(layout.top_frame->position == truth.layout.top_frame->position);
        REQUIRE(layout.right_frame.has_value());
        CHECK(layout.right_frame->position == truth.layout.right_frame->position);

        auto coords = [](const std::vector<Tick>& ticks, AxisKind axis) {
            std::vector<int> out;
            for (const Tick& t : ticks) {
                if (t.axis == axis) {
                    out.push_back(t.coordinate);
                }
            }
            std::sort(out.begin(), out.end());
            return out;
        };
        CHECK(coords(layout.ticks, AxisKind::X) == coords(truth.layout.ticks, AxisKind::X));
        CHECK(coords(layout.ticks, AxisKind::Y) == coords(truth.layout.ticks, AxisKind::Y));

        // Grid detection must never invent lines: everything found is a truth
        // grid position. Completeness is not required here because the legend
        // block legitimately occludes part of the grid.
        auto positions = [](const std::vector<AxisLine>& lines, Orientation o) {
            std::vector<int> out;
            for (const AxisLine& l : lines) {
                if (l.orientation == o) {
                    out.push_back(l.position);
                }
            }
            std::sort(out.begin(), out.end());
            return out;
        };
        for (Orientation o : {Orientation::Horizontal, Orientation::Vertical}) {
            const auto truth_pos = positions(truth.layout.grid_lines, o);
            for (int p : positions(layout.grid_lines, o)) {
                CHECK(std::find(truth_pos.begin(), truth_pos.end(), p) != truth_pos.end());
            }
        }
        CHECK_FALSE(layout.grid_lines.empty());
    }

    TEST_CASE("analyze_layout matches generator ground truth on bare charts")
    {
        ChartSpec spec = random_chart_spec(12);
        spec.frame = false;
        spec.grid = false;
        const auto [img, truth] = generate_chart(spec);
        const GraphLayout layout = analyze_layout(img);
        CHECK(layout.x_axis.position == truth.layout.x_axis.position);
        CHECK(layout.y_axis.position == truth.layout.y_axis.position);
        CHECK(layout.data_region == truth.layout.data_region);
        CHECK_FALSE(layout.top_frame.has_value());
        CHECK_FALSE(layout.right_frame.has_value());
        CHECK(layout.grid_lines.empty());
    }

    TEST_CASE("detect_axes recovers generator axes within one pixel over 100 seeds")
    {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const ChartSpec spec = random_chart_spec(seed);
            const auto [img, truth] = generate_chart(spec);
            const auto [x_axis, y_axis] = detect_axes(img);
            CHECK(std::abs(x_axis.position - truth.layout.x_axis.position) <= 1);
            CHECK(std::abs(y_axis.position - truth.layout.y_axis.position) <= 1);
        }
    }

    TEST_CASE("detected tick coordinates form a near-exact progression")
    {
        const ChartSpec spec = random_chart_spec(13);
        const auto [img, truth] = generate_chart(spec);
        const auto ticks = detect_ticks(img, detect_axes(img));
        const std::vector<int> xs = x_tick_coords(ticks);
        REQUIRE(xs.size() >= 3);
        for (std::size_t i = 2; i < xs.size(); ++i) {
            const int step_a = xs[i] - xs[i - 1];
            const int step_b = xs[i - 1] - xs[i - 2];
            CHECK(std::abs(step_a - step_b) <= 2);
        }
    }
}
