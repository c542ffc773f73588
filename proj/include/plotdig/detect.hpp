#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plotdig/geometry.hpp"
#include "plotdig/raster.hpp"

namespace plotdig {

// Graph/SubGraph/NonGraph classify subfigure panels; the remaining six
// categories are in-graph objects scheduled for erasure.
enum class ObjectCategory {
    Graph,
    SubGraph,
    NonGraph,
    Text,
    Marker,
    Legend,
    Arrow,
    InsetGraph,
    InsetImage,
};

bool is_subfigure_category(ObjectCategory c);
bool is_text_bearing(ObjectCategory c);  // Text and Legend carry recognized strings

std::string_view category_name(ObjectCategory c);
ObjectCategory category_from_name(std::string_view name);  // throws UnknownCategory

struct DetectedObject {
    ObjectCategory category = ObjectCategory::Graph;
    BoundingBox box;
    double confidence = 1.0;
    std::optional<std::string> text;
};

// Reads a `<stem>.ann.json` sidecar and validates every record against the
// image bounds. The sidecar stands in for a trained detector plus recognizer.
std::vector<DetectedObject> parse_annotations(const std::filesystem::path& path,
                                              const RasterImage& img);

// One crop per Graph/SubGraph detection, tagged with its category; NonGraph
// panels are dropped.
std::vector<std::pair<RasterImage, ObjectCategory>> split_subfigures(
    const RasterImage& img, const std::vector<DetectedObject>& detections);

struct GutterParams {
    int white_threshold = 245;
    double white_fraction = 0.98;
    int min_band_px = 8;
};

// Annotation-free fallback: splits along near-white full-width/full-height
// bands and returns the panel boxes in reading order.
std::vector<BoundingBox> heuristic_gutter_split(const RasterImage& img,
                                                const GutterParams& params = {});

}  // namespace plotdig
