#include "plotdig/lines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <unordered_map>

#include "plotdig/errors.hpp"

namespace plotdig {

std::vector<PixelPoint> collect_colored_pixels(const RasterImage& img, const BoundingBox& region,
                                               int whiten_threshold)
{
    if (!region.valid() || region.x_max > img.width() || region.y_max > img.height()) {
        throw OutOfBounds("pixel collection region outside image bounds");
    }
    std::vector<PixelPoint> out;
    for (int y = region.y_min; y < region.y_max; ++y) {
        for (int x = region.x_min; x < region.x_max; ++x) {
            const Color c = img.at(x, y);
            if (c.r < whiten_threshold || c.g < whiten_threshold || c.b < whiten_threshold) {
                out.push_back(PixelPoint{x, y, c});
            }
        }
    }
    return out;
}

DbscanParams calibrate_params(const std::vector<PixelPoint>& points, const BoundingBox& region)
{
    if (points.empty()) {
        throw EmptyInput("cannot calibrate DBSCAN on zero points");
    }
    const double area = double(region.area());
    const double ratio = double(points.size()) / area;
    const double ratio_factor = std::min(1.0, ratio / 0.01);

    const auto base = double(std::llround(0.002 * area)) * ratio_factor;
    int min_pts = int(std::max<long long>(8, std::llround(base)));
    const int cap = std::max(1, int(std::floor(0.05 * double(points.size()))));
    min_pts = std::min(min_pts, cap);

    return DbscanParams{25.0, min_pts};
}

namespace {

struct ColorGroup {
    Color color;
    std::vector<int> point_indices;  // into the canonically sorted point list
};

double group_distance(const ColorGroup& a, const ColorGroup& b)
{
    return color_distance(a.color, b.color);
}

Color mean_color_of(const std::vector<PixelPoint>& members)
{
    std::int64_t r = 0, g = 0, b = 0;
    for (const PixelPoint& p : members) {
        r += p.color.r;
        g += p.color.g;
        b += p.color.b;
    }
    const auto n = std::int64_t(members.size());
    auto mean = [n](std::int64_t sum) { return std::uint8_t((sum + n / 2) / n); };
    return Color{mean(r), mean(g), mean(b)};
}

}  // namespace

std::vector<LineCluster> dbscan_cluster(const std::vector<PixelPoint>& points,
                                        const DbscanParams& params, bool assign_noise_to_nearest)
{
    if (points.empty()) {
        return {};
    }

    // Canonical scan order makes the outcome independent of input order.
    std::vector<PixelPoint> sorted = points;
    std::sort(sorted.begin(), sorted.end(), [](const PixelPoint& a, const PixelPoint& b) {
        return a.y != b.y ? a.y < b.y : (a.x != b.x ? a.x < b.x : false);
    });

    // Identical colors share a neighborhood, so cluster unique colors with
    // multiplicities instead of raw pixels.
    std::vector<ColorGroup> groups;
    std::unordered_map<std::uint32_t, int> index_of;
    for (int i = 0; i < int(sorted.size()); ++i) {
        const Color c = sorted[std::size_t(i)].color;
        const std::uint32_t key =
            (std::uint32_t(c.r) << 16) | (std::uint32_t(c.g) << 8) | c.b;
        auto [it, inserted] = index_of.try_emplace(key, int(groups.size()));
        if (inserted) {
            groups.push_back(ColorGroup{c, {}});
        }
        groups[std::size_t(it->second)].point_indices.push_back(i);
    }

    const int n_groups = int(groups.size());
    std::vector<std::vector<int>> neighbors(static_cast<std::size_t>(n_groups));
    std::vector<std::int64_t> weight(std::size_t(n_groups), 0);
    for (int i = 0; i < n_groups; ++i) {
        for (int j = 0; j < n_groups; ++j) {
            if (group_distance(groups[std::size_t(i)], groups[std::size_t(j)]) <= params.eps) {
                neighbors[std::size_t(i)].push_back(j);
                weight[std::size_t(i)] += std::int64_t(groups[std::size_t(j)].point_indices.size());
            }
        }
    }

    std::vector<int> cluster_of(std::size_t(n_groups), -1);
    int next_cluster = 0;
    for (int seed = 0; seed < n_groups; ++seed) {
        if (cluster_of[std::size_t(seed)] != -1 || weight[std::size_t(seed)] < params.min_pts) {
            continue;
        }
        const int cluster = next_cluster++;
        cluster_of[std::size_t(seed)] = cluster;
        std::deque<int> queue = {seed};
        while (!queue.empty()) {
            const int g = queue.front();
            queue.pop_front();
            for (int nb : neighbors[std::size_t(g)]) {
                if (cluster_of[std::size_t(nb)] != -1) {
                    continue;
                }
                cluster_of[std::size_t(nb)] = cluster;
                if (weight[std::size_t(nb)] >= params.min_pts) {
                    queue.push_back(nb);  // only core colors keep expanding
                }
            }
        }
    }

    std::vector<LineCluster> clusters(static_cast<std::size_t>(next_cluster));
    std::vector<int> first_group(std::size_t(next_cluster), n_groups);
    for (int g = 0; g < n_groups; ++g) {
        const int c = cluster_of[std::size_t(g)];
        if (c >= 0) {
            first_group[std::size_t(c)] = std::min(first_group[std::size_t(c)], g);
        }
    }
    for (int i = 0; i < int(sorted.size()); ++i) {
        const Color c = sorted[std::size_t(i)].color;
        const std::uint32_t key =
            (std::uint32_t(c.r) << 16) | (std::uint32_t(c.g) << 8) | c.b;
        const int cluster = cluster_of[std::size_t(index_of[key])];
        if (cluster >= 0) {
            clusters[std::size_t(cluster)].members.push_back(sorted[std::size_t(i)]);
        }
    }

    if (assign_noise_to_nearest && !clusters.empty()) {
        std::vector<Color> reps(clusters.size());
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            reps[c] = mean_color_of(clusters[c].members);
        }
        for (int i = 0; i < int(sorted.size()); ++i) {
            const Color c = sorted[std::size_t(i)].color;
            const std::uint32_t key =
                (std::uint32_t(c.r) << 16) | (std::uint32_t(c.g) << 8) | c.b;
            if (cluster_of[std::size_t(index_of[key])] >= 0) {
                continue;
            }
            std::size_t best = 0;
            for (std::size_t k = 1; k < reps.size(); ++k) {
                if (color_distance(c, reps[k]) < color_distance(c, reps[best])) {
                    best = k;
                }
            }
            clusters[best].members.push_back(sorted[std::size_t(i)]);
        }
        for (auto& cluster : clusters) {
            std::sort(cluster.members.begin(), cluster.members.end(),
                      [](const PixelPoint& a, const PixelPoint& b) {
                          return a.y != b.y ? a.y < b.y : a.x < b.x;
                      });
        }
    }

    // Largest line first; ties keep discovery order.
    std::vector<int> order(clusters.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = int(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return clusters[std::size_t(a)].members.size() > clusters[std::size_t(b)].members.size();
    });

    std::vector<LineCluster> out;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        LineCluster cluster = std::move(clusters[std::size_t(order[rank])]);
        cluster.id = int(rank);
        cluster.representative_color = mean_color_of(cluster.members);
        out.push_back(std::move(cluster));
    }
    return out;
}

std::vector<PointXY> trace_series(const LineCluster& cluster, const BoundingBox& region)
{
    std::unordered_map<int, std::pair<double, int>> by_column;
    for (const PixelPoint& p : cluster.members) {
        if (!region.contains(p.x, p.y)) {
            continue;
        }
        auto& [sum, count] = by_column[p.x];
        sum += p.y;
        ++count;
    }
    std::vector<int> columns;
    columns.reserve(by_column.size());
    for (const auto& [col, acc] : by_column) {
        columns.push_back(col);
    }
    std::sort(columns.begin(), columns.end());

    std::vector<PointXY> out;
    out.reserve(columns.size());
    for (int col : columns) {
        const auto& [sum, count] = by_column[col];
        out.push_back(PointXY{double(col), sum / count});
    }
    return out;
}

}  // namespace plotdig
