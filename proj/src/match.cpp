#include "plotdig/match.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "plotdig/errors.hpp"

namespace plotdig {

double cosine_similarity(const std::array<double, 3>& a, const std::array<double, 3>& b)
{
    const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    const double na = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    const double nb = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
    if (na == 0.0 || nb == 0.0) {
        throw ZeroVector("cosine similarity of a zero vector is undefined");
    }
    return dot / (na * nb);
}

std::vector<LegendAssignment> assign_legends(const std::vector<LineCluster>& clusters,
                                             const std::vector<LegendEntry>& legends)
{
    if (clusters.size() != legends.size()) {
        throw CountMismatch("cluster count " + std::to_string(clusters.size()) +
                            " != legend count " + std::to_string(legends.size()));
    }
    const int n = int(clusters.size());
    if (n == 0) {
        return {};
    }

    std::vector<std::vector<double>> sim(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int c = 0; c < n; ++c) {
        for (int l = 0; l < n; ++l) {
            sim[std::size_t(c)][std::size_t(l)] =
                cosine_similarity(to_vector(clusters[std::size_t(c)].representative_color),
                                  to_vector(legends[std::size_t(l)].marker_color));
        }
    }

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best_perm;
    double best = -std::numeric_limits<double>::infinity();
    double second = -std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (int c = 0; c < n; ++c) {
            total += sim[std::size_t(c)][std::size_t(perm[std::size_t(c)])];
        }
        if (total > best) {
            second = best;
            best = total;
            best_perm = perm;
        } else if (total > second) {
            second = total;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (best - second <= 1e-9) {
        throw AmbiguousAssignment("two legend assignments score within 1e-9");
    }

    std::vector<LegendAssignment> out;
    out.reserve(std::size_t(n));
    for (int c = 0; c < n; ++c) {
        const int l = best_perm[std::size_t(c)];
        out.push_back(LegendAssignment{clusters[std::size_t(c)].id, l,
                                       sim[std::size_t(c)][std::size_t(l)]});
    }
    return out;
}

int levenshtein(std::string_view a, std::string_view b)
{
    const std::size_t n = b.size();
    std::vector<int> prev(n + 1), cur(n + 1);
    std::iota(prev.begin(), prev.end(), 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = int(i);
        for (std::size_t j = 1; j <= n; ++j) {
            const int subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

namespace {

// Distance from a point to the closed rectangle covered by a half-open box;
// zero for points inside.
double box_to_point_distance(const BoundingBox& box, int px, int py)
{
    const double dx = std::max({double(box.x_min - px), 0.0, double(px - (box.x_max - 1))});
    const double dy = std::max({double(box.y_min - py), 0.0, double(py - (box.y_max - 1))});
    return std::hypot(dx, dy);
}

double sigmoid(double z)
{
    return 1.0 / (1.0 + std::exp(-z));
}

}  // namespace

double text_match_score(const RasterImage& img, const DetectedObject& text,
                        const LineCluster& cluster, const BoundingBox& data_region,
                        const TextMatchWeights& weights)
{
    constexpr double kMaxRgbDistance = 441.672955930063709;  // opposite cube corners
    const double diagonal = std::hypot(double(data_region.width()), double(data_region.height()));
    const auto ink = mean_ink_color(img, text.box);
    if (!ink || cluster.members.empty() || diagonal <= 0.0) {
        return 0.0;
    }
    double min_dist = std::numeric_limits<double>::infinity();
    for (const PixelPoint& p : cluster.members) {
        min_dist = std::min(min_dist, box_to_point_distance(text.box, p.x, p.y));
    }
    const double f1 = min_dist / diagonal;
    const double f2 = color_distance(*ink, cluster.representative_color) / kMaxRgbDistance;
    return sigmoid(weights.bias - weights.w_dist * f1 - weights.w_color * f2);
}

std::vector<std::optional<int>> match_texts(const RasterImage& img,
                                            const std::vector<DetectedObject>& texts,
                                            const std::vector<LineCluster>& clusters,
                                            const BoundingBox& data_region,
                                            const TextMatchWeights& weights)
{
    std::vector<std::optional<int>> out(texts.size());
    for (std::size_t t = 0; t < texts.size(); ++t) {
        double best_score = 0.0;
        std::optional<int> best_cluster;
        for (const LineCluster& cluster : clusters) {
            const double score = text_match_score(img, texts[t], cluster, data_region, weights);
            if (score > best_score) {
                best_score = score;
                best_cluster = cluster.id;
            }
        }
        if (best_score > 0.5) {
            out[t] = best_cluster;
        }
    }
    return out;
}

}  // namespace plotdig
