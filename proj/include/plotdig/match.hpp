#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plotdig/detect.hpp"
#include "plotdig/lines.hpp"
#include "plotdig/raster.hpp"

namespace plotdig {

// A legend row: the marker swatch and the caption next to it.
struct LegendEntry {
    Color marker_color;  // mean ink color inside the marker box
    std::string label;
    BoundingBox marker_box;
    BoundingBox label_box;
};

enum class LabelSource { LegendMatch, TextMatch, Anonymous };

struct SeriesLabel {
    LabelSource source = LabelSource::Anonymous;
    std::optional<std::string> label;  // present unless Anonymous
    double confidence = 0.0;           // in [0, 1]
};

// Throws ZeroVector when either argument has zero norm.
double cosine_similarity(const std::array<double, 3>& a, const std::array<double, 3>& b);

inline std::array<double, 3> to_vector(Color c)
{
    return {double(c.r), double(c.g), double(c.b)};
}

struct LegendAssignment {
    int cluster_id = 0;
    int legend_index = 0;
    double similarity = 0.0;
};

// Pairs every cluster with a distinct legend entry so that the summed cosine
// similarity of line color vs marker color is maximal. The search enumerates
// all bijections, which is cheap at chart scale (a handful of series).
// Throws CountMismatch when the counts differ and AmbiguousAssignment when a
// second bijection comes within 1e-9 of the best total.
std::vector<LegendAssignment> assign_legends(const std::vector<LineCluster>& clusters,
                                             const std::vector<LegendEntry>& legends);

// Minimum number of single-character inserts, deletes, and substitutions
// turning `a` into `b`.
int levenshtein(std::string_view a, std::string_view b);

struct TextMatchWeights {
    double w_dist = 8.0;
    double w_color = 6.0;
    double bias = 4.0;
};

// Logistic score for one (text, cluster) pair. Features: the minimum pixel
// distance from the text box to a member pixel (zero when a member lies
// inside the box) over the data-region diagonal, and the RGB distance between
// the text's ink color and the cluster color over the maximum possible
// distance. Zero when the text box holds no ink or the cluster is empty.
double text_match_score(const RasterImage& img, const DetectedObject& text,
                        const LineCluster& cluster, const BoundingBox& data_region,
                        const TextMatchWeights& weights = {});

// Pairs in-graph caption texts with line clusters: each text maps to its
// best-scoring cluster when that score exceeds 0.5, else stays unmatched.
// `img` must be the image before any erasure, so the ink color is still
// present. Output is parallel to `texts`.
std::vector<std::optional<int>> match_texts(const RasterImage& img,
                                            const std::vector<DetectedObject>& texts,
                                            const std::vector<LineCluster>& clusters,
                                            const BoundingBox& data_region,
                                            const TextMatchWeights& weights = {});

}  // namespace plotdig
