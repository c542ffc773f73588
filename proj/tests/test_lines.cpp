#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "plotdig/errors.hpp"
#include "plotdig/lines.hpp"
#include "plotdig/raster.hpp"

using namespace plotdig;

namespace {

// n points with unique coordinates laid out in canonical (y, x) order.
std::vector<PixelPoint> grid_points(int n, const std::vector<Color>& colors)
{
    std::vector<PixelPoint> pts;
    pts.reserve(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        pts.push_back(PixelPoint{i % 40, i / 40, colors[std::size_t(i) % colors.size()]});
    }
    return pts;
}

std::vector<PixelPoint> filler_points(int n)
{
    return grid_points(n, {Color{10, 10, 10}});
}

// Per-point labels recovered through the unique (x, y) coordinates.
std::vector<int> labels_from_clusters(const std::vector<LineCluster>& clusters, int n)
{
    std::vector<int> labels(std::size_t(n), -1);
    for (const LineCluster& c : clusters) {
        for (const PixelPoint& p : c.members) {
            labels[std::size_t(p.y) * 40 + std::size_t(p.x)] = c.id;
        }
    }
    return labels;
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b)
{
    if (a.size() != b.size()) {
        return false;
    }
    std::map<int, int> fwd, rev;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] == -1) != (b[i] == -1)) {
            return false;
        }
        if (a[i] == -1) {
            continue;
        }
        auto [f, f_new] = fwd.try_emplace(a[i], b[i]);
        auto [r, r_new] = rev.try_emplace(b[i], a[i]);
        if (f->second != b[i] || r->second != a[i]) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_SUITE("lines")
{
    TEST_CASE("collect_colored_pixels keeps ink in canonical order")
    {
        RasterImage img(20, 10);
        img.set(5, 3, Color{200, 30, 30});
        img.set(2, 7, Color{30, 30, 200});
        img.set(9, 3, Color{240, 240, 240});
        img.set(4, 4, Color{250, 250, 250});  // above threshold, skipped

        const auto pts = collect_colored_pixels(img, BoundingBox{0, 0, 20, 10});
        REQUIRE(pts.size() == 3);
        CHECK(pts[0] == PixelPoint{5, 3, Color{200, 30, 30}});
        CHECK(pts[1] == PixelPoint{9, 3, Color{240, 240, 240}});
        CHECK(pts[2] == PixelPoint{2, 7, Color{30, 30, 200}});
    }

    TEST_CASE("collect_colored_pixels respects region and threshold")
    {
        RasterImage img(20, 10);
        img.set(5, 3, Color{200, 30, 30});
        img.set(15, 3, Color{200, 30, 30});

        const auto in_window = collect_colored_pixels(img, BoundingBox{0, 0, 10, 10});
        REQUIRE(in_window.size() == 1);
        CHECK(in_window[0].x == 5);

        img.set(6, 3, Color{250, 250, 250});
        const auto strict = collect_colored_pixels(img, BoundingBox{0, 0, 10, 10}, 251);
        CHECK(strict.size() == 2);  // higher threshold keeps the near-white pixel
    }

    TEST_CASE("collect_colored_pixels rejects regions outside the image")
    {
        const RasterImage img(20, 10);
        CHECK_THROWS_AS(collect_colored_pixels(img, BoundingBox{0, 0, 21, 10}), OutOfBounds);
        CHECK_THROWS_AS(collect_colored_pixels(img, BoundingBox{5, 5, 5, 9}), OutOfBounds);
    }

    TEST_CASE("calibrate_params fixtures")
    {
        const BoundingBox vga{0, 0, 640, 480};

        const DbscanParams one_percent = calibrate_params(filler_points(3072), vga);
        CHECK(one_percent.eps == 25.0);
        CHECK(one_percent.min_pts == 153);  // area term 614 capped at 5% of n

        const DbscanParams half_percent = calibrate_params(filler_points(1536), vga);
        CHECK(half_percent.min_pts == 76);  // sparsity halves the base before the cap

        const DbscanParams tiny = calibrate_params(filler_points(200), BoundingBox{0, 0, 50, 50});
        CHECK(tiny.min_pts == 8);  // floor dominates small regions

        CHECK_THROWS_AS(calibrate_params({}, vga), EmptyInput);
    }

    TEST_CASE("two well separated colors form two clusters")
    {
        std::vector<PixelPoint> pts;
        for (int i = 0; i < 100; ++i) {
            pts.push_back(PixelPoint{i % 40, i / 40, Color{200, 30, 30}});
        }
        for (int i = 0; i < 100; ++i) {
            pts.push_back(PixelPoint{i % 40, 10 + i / 40, Color{30, 30, 200}});
        }
        const auto clusters = dbscan_cluster(pts, DbscanParams{25.0, 8});
        REQUIRE(clusters.size() == 2);
        CHECK(clusters[0].id == 0);
        CHECK(clusters[1].id == 1);
        CHECK(clusters[0].members.size() == 100);
        CHECK(clusters[1].members.size() == 100);
        // Size tie: discovery order breaks it, and red appears first in the scan.
        CHECK(clusters[0].representative_color == Color{200, 30, 30});
        CHECK(clusters[1].representative_color == Color{30, 30, 200});
    }

    TEST_CASE("identical colors collapse to one cluster")
    {
        const auto clusters =
            dbscan_cluster(grid_points(50, {Color{60, 120, 60}}), DbscanParams{25.0, 8});
        REQUIRE(clusters.size() == 1);
        CHECK(clusters[0].members.size() == 50);
        CHECK(clusters[0].representative_color == Color{60, 120, 60});
    }

    TEST_CASE("too few points for the density floor yields nothing")
    {
        const auto clusters =
            dbscan_cluster(grid_points(5, {Color{60, 120, 60}}), DbscanParams{25.0, 10});
        CHECK(clusters.empty());
        CHECK(dbscan_cluster({}, DbscanParams{}).empty());
    }

    TEST_CASE("noise joins the nearest cluster only on request")
    {
        std::vector<PixelPoint> pts;
        for (int i = 0; i < 100; ++i) {
            pts.push_back(PixelPoint{i % 40, i / 40, Color{200, 30, 30}});
        }
        for (int i = 0; i < 100; ++i) {
            pts.push_back(PixelPoint{i % 40, 10 + i / 40, Color{30, 30, 200}});
        }
        for (int i = 0; i < 3; ++i) {
            pts.push_back(PixelPoint{i, 20, Color{180, 60, 60}});  // reddish outliers
        }

        const auto strict = dbscan_cluster(pts, DbscanParams{25.0, 8}, false);
        REQUIRE(strict.size() == 2);
        CHECK(strict[0].members.size() == 100);
        CHECK(strict[1].members.size() == 100);

        const auto merged = dbscan_cluster(pts, DbscanParams{25.0, 8}, true);
        REQUIRE(merged.size() == 2);
        CHECK(merged[0].members.size() == 103);  // outliers are closer to red
        CHECK(merged[1].members.size() == 100);
        CHECK(merged[0].representative_color == Color{199, 31, 31});
        CHECK(std::is_sorted(merged[0].members.begin(), merged[0].members.end(),
                             [](const PixelPoint& a, const PixelPoint& b) {
                                 return a.y != b.y ? a.y < b.y : a.x < b.x;
                             }));
    }

    TEST_CASE("input order never changes the outcome")
    {
        std::mt19937 rng(91);
        std::vector<PixelPoint> pts;
        std::uniform_int_distribution<int> channel(0, 255);
        for (int i = 0; i < 150; ++i) {
            pts.push_back(PixelPoint{
                i % 40, i / 40,
                Color{std::uint8_t(channel(rng)), std::uint8_t(channel(rng)),
                      std::uint8_t(channel(rng))}});
        }
        const auto reference = dbscan_cluster(pts, DbscanParams{40.0, 5});
        for (int trial = 0; trial < 5; ++trial) {
            std::shuffle(pts.begin(), pts.end(), rng);
            const auto shuffled = dbscan_cluster(pts, DbscanParams{40.0, 5});
            REQUIRE(shuffled.size() == reference.size());
            for (std::size_t c = 0; c < reference.size(); ++c) {
                CHECK(shuffled[c].id == reference[c].id);
                CHECK(shuffled[c].representative_color == reference[c].representative_color);
                CHECK(shuffled[c].members == reference[c].members);
            }
        }
    }

    TEST_CASE("a shared border color goes to the cluster seeded first")
    {
        // Core colors at 100 and 150 red, satellites at 95 and 155, and a lone
        // bridge at 125 exactly eps away from both cores. Weight at the cores
        // is 7+8+1 = 16, everywhere else 15, so with min_pts 16 the bridge is
        // border for both clusters and the scan order decides its owner.
        const DbscanParams params{25.0, 16};
        auto build = [](bool red_first) {
            std::vector<PixelPoint> pts;
            auto add_row = [&pts](int y, int n, Color c) {
                for (int x = 0; x < n; ++x) {
                    pts.push_back(PixelPoint{x, y, c});
                }
            };
            const int a = red_first ? 0 : 2;
            const int b = red_first ? 2 : 0;
            add_row(a + 0, 7, Color{100, 0, 0});
            add_row(a + 1, 8, Color{95, 0, 0});
            add_row(b + 0, 7, Color{150, 0, 0});
            add_row(b + 1, 8, Color{155, 0, 0});
            add_row(4, 1, Color{125, 0, 0});
            return pts;
        };

        auto owner_of_bridge = [](const std::vector<LineCluster>& clusters) {
            for (const LineCluster& c : clusters) {
                for (const PixelPoint& p : c.members) {
                    if (p.color == Color{125, 0, 0}) {
                        return c.representative_color;
                    }
                }
            }
            return Color{0, 0, 0};
        };

        const auto low_first = dbscan_cluster(build(true), params);
        REQUIRE(low_first.size() == 2);
        CHECK(low_first[0].members.size() == 16);
        CHECK(low_first[1].members.size() == 15);
        CHECK(owner_of_bridge(low_first).r < 125);

        const auto high_first = dbscan_cluster(build(false), params);
        REQUIRE(high_first.size() == 2);
        CHECK(high_first[0].members.size() == 16);
        CHECK(owner_of_bridge(high_first).r > 125);
    }

    TEST_CASE("clustering agrees with a naive pointwise reference")
    {
        std::mt19937 rng(92);
        std::uniform_int_distribution<int> n_dist(20, 200);
        std::uniform_int_distribution<int> k_dist(2, 4);
        std::uniform_int_distribution<int> channel(0, 255);
        std::uniform_int_distribution<int> jitter(-10, 10);
        std::uniform_real_distribution<double> eps_dist(15.0, 40.0);
        std::uniform_int_distribution<int> min_pts_dist(3, 20);

        for (int trial = 0; trial < 20; ++trial) {
            const int n = n_dist(rng);
            const int k = k_dist(rng);
            std::vector<Color> bases;
            for (int i = 0; i < k; ++i) {
                bases.push_back(Color{std::uint8_t(channel(rng)), std::uint8_t(channel(rng)),
                                      std::uint8_t(channel(rng))});
            }
            std::vector<PixelPoint> pts;
            for (int i = 0; i < n; ++i) {
                Color c;
                if (i % 5 == 4) {
                    c = Color{std::uint8_t(channel(rng)), std::uint8_t(channel(rng)),
                              std::uint8_t(channel(rng))};
                } else {
                    const Color base = bases[std::size_t(i % k)];
                    auto ch = [&](int v) {
                        return std::uint8_t(std::clamp(v + jitter(rng), 0, 255));
                    };
                    c = Color{ch(base.r), ch(base.g), ch(base.b)};
                }
                pts.push_back(PixelPoint{i % 40, i / 40, c});
            }
            const double eps = eps_dist(rng);
            const int min_pts = min_pts_dist(rng);

            const auto expected = oracle::dbscan_labels(pts, eps, min_pts);
            const auto clusters = dbscan_cluster(pts, DbscanParams{eps, min_pts});
            const auto actual = labels_from_clusters(clusters, n);
            CHECK(same_partition(expected, actual));
            for (std::size_t c = 1; c < clusters.size(); ++c) {
                CHECK(clusters[c - 1].members.size() >= clusters[c].members.size());
            }
        }
    }

    TEST_CASE("trace_series averages rows per column")
    {
        LineCluster cluster;
        cluster.members = {PixelPoint{5, 90, Color{200, 30, 30}},
                           PixelPoint{5, 110, Color{200, 30, 30}}};
        const auto pts = trace_series(cluster, BoundingBox{0, 0, 300, 200});
        REQUIRE(pts.size() == 1);
        CHECK(pts[0] == PointXY{5.0, 100.0});
    }

    TEST_CASE("trace_series emits ascending columns and skips gaps")
    {
        LineCluster cluster;
        for (int x = 0; x <= 200; ++x) {
            if (x == 50 || x == 51) {
                continue;  // a gap must stay a gap
            }
            cluster.members.push_back(PixelPoint{x, 42, Color{30, 30, 200}});
        }
        const auto pts = trace_series(cluster, BoundingBox{0, 0, 300, 200});
        REQUIRE(pts.size() == 199);
        CHECK(std::is_sorted(pts.begin(), pts.end(),
                             [](const PointXY& a, const PointXY& b) { return a.x < b.x; }));
        for (const PointXY& p : pts) {
            CHECK(p.y == 42.0);
            CHECK(p.x != 50.0);
            CHECK(p.x != 51.0);
        }
    }

    TEST_CASE("trace_series ignores members outside the region")
    {
        LineCluster cluster;
        cluster.members = {PixelPoint{5, 10, Color{200, 30, 30}},
                           PixelPoint{5, 190, Color{200, 30, 30}},
                           PixelPoint{250, 10, Color{200, 30, 30}}};
        const auto pts = trace_series(cluster, BoundingBox{0, 0, 100, 100});
        REQUIRE(pts.size() == 1);
        CHECK(pts[0] == PointXY{5.0, 10.0});
        CHECK(trace_series(cluster, BoundingBox{60, 60, 70, 70}).empty());
    }
}
