#include "plotdig/detect.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include <json.hpp>

#include "plotdig/errors.hpp"

namespace plotdig {

namespace {

constexpr std::array<std::pair<std::string_view, ObjectCategory>, 9> kCategoryNames = {{
    {"graph", ObjectCategory::Graph},
    {"sub_graph", ObjectCategory::SubGraph},
    {"non_graph", ObjectCategory::NonGraph},
    {"text", ObjectCategory::Text},
    {"marker", ObjectCategory::Marker},
    {"legend", ObjectCategory::Legend},
    {"arrow", ObjectCategory::Arrow},
    {"inset_graph", ObjectCategory::InsetGraph},
    {"inset_image", ObjectCategory::InsetImage},
}};

}  // namespace

bool is_subfigure_category(ObjectCategory c)
{
    return c == ObjectCategory::Graph || c == ObjectCategory::SubGraph
        || c == ObjectCategory::NonGraph;
}

bool is_text_bearing(ObjectCategory c)
{
    return c == ObjectCategory::Text || c == ObjectCategory::Legend;
}

std::string_view category_name(ObjectCategory c)
{
    for (const auto& [name, cat] : kCategoryNames) {
        if (cat == c) {
            return name;
        }
    }
    return "";
}

ObjectCategory category_from_name(std::string_view name)
{
    for (const auto& [n, cat] : kCategoryNames) {
        if (n == name) {
            return cat;
        }
    }
    throw UnknownCategory("unknown object category: " + std::string(name));
}

std::vector<DetectedObject> parse_annotations(const std::filesystem::path& path,
                                              const RasterImage& img)
{
    std::ifstream in(path);
    if (!in) {
        throw FileNotFound("cannot open annotation file: " + path.string());
    }

    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedAnnotation("bad annotation JSON in " + path.string() + ": " + e.what());
    }

    if (!doc.is_object() || !doc.contains("image") || !doc.contains("objects")
        || !doc["objects"].is_array()) {
        throw MalformedAnnotation("annotation schema violation in " + path.string());
    }
    const auto& meta = doc["image"];
    if (!meta.is_object() || !meta.contains("width") || !meta.contains("height")) {
        throw MalformedAnnotation("missing image dimensions in " + path.string());
    }
    if (meta["width"].get<int>() != img.width() || meta["height"].get<int>() != img.height()) {
        throw MalformedAnnotation("annotation dimensions do not match image in " + path.string());
    }

    std::vector<DetectedObject> out;
    for (const auto& rec : doc["objects"]) {
        if (!rec.is_object() || !rec.contains("category") || !rec.contains("box")) {
            throw MalformedAnnotation("object record missing fields in " + path.string());
        }
        DetectedObject obj;
        obj.category = category_from_name(rec["category"].get<std::string>());

        const auto& box = rec["box"];
        if (!box.is_array() || box.size() != 4) {
            throw MalformedAnnotation("box must be [x_min, y_min, x_max, y_max] in "
                                      + path.string());
        }
        obj.box = BoundingBox{box[0].get<int>(), box[1].get<int>(), box[2].get<int>(),
                              box[3].get<int>()};
        if (!obj.box.valid()) {
            throw MalformedAnnotation("degenerate box in " + path.string());
        }
        if (obj.box.x_max > img.width() || obj.box.y_max > img.height()) {
            throw BoxOutOfBounds("box exceeds image bounds in " + path.string());
        }

        if (rec.contains("confidence")) {
            obj.confidence = rec["confidence"].get<double>();
            if (obj.confidence < 0.0 || obj.confidence > 1.0) {
                throw MalformedAnnotation("confidence outside [0, 1] in " + path.string());
            }
        }
        if (rec.contains("text") && !rec["text"].is_null()) {
            if (!is_text_bearing(obj.category)) {
                throw MalformedAnnotation("text on a non-text category in " + path.string());
            }
            obj.text = rec["text"].get<std::string>();
        }
        out.push_back(std::move(obj));
    }
    return out;
}

std::vector<std::pair<RasterImage, ObjectCategory>> split_subfigures(
    const RasterImage& img, const std::vector<DetectedObject>& detections)
{
    std::vector<std::pair<RasterImage, ObjectCategory>> out;
    for (const auto& det : detections) {
        if (!is_subfigure_category(det.category)) {
            throw MalformedAnnotation("split_subfigures given an in-graph category");
        }
        if (det.category == ObjectCategory::NonGraph) {
            continue;
        }
        out.emplace_back(crop(img, det.box), det.category);
    }
    return out;
}

namespace {

// Maximal runs of `true` rows/columns at least min_band long become gutters;
// the complement segments are panel extents.
struct Segments {
    std::vector<std::pair<int, int>> panels;  // half-open [start, end)
};

Segments split_axis(const std::vector<bool>& is_white, int min_band)
{
    const int n = int(is_white.size());
    Segments out;
    int pos = 0;
    while (pos < n) {
        if (is_white[pos]) {
            int end = pos;
            while (end < n && is_white[end]) {
                ++end;
            }
            if (end - pos >= min_band) {
                pos = end;
                continue;
            }
            // Narrow white run: belongs to the surrounding panel.
        }
        int end = pos;
        while (end < n) {
            if (is_white[end]) {
                int white_end = end;
                while (white_end < n && is_white[white_end]) {
                    ++white_end;
                }
                if (white_end - end >= min_band) {
                    break;
                }
                end = white_end;
                continue;
            }
            ++end;
        }
        out.panels.emplace_back(pos, end);
        pos = end;
    }
    return out;
}

}  // namespace

std::vector<BoundingBox> heuristic_gutter_split(const RasterImage& img, const GutterParams& params)
{
    auto is_background = [&](Color c) {
        return c.r >= params.white_threshold && c.g >= params.white_threshold
            && c.b >= params.white_threshold;
    };

    std::vector<bool> white_row(std::size_t(img.height()), false);
    for (int y = 0; y < img.height(); ++y) {
        int count = 0;
        for (int x = 0; x < img.width(); ++x) {
            count += is_background(img.at(x, y)) ? 1 : 0;
        }
        white_row[y] = count >= params.white_fraction * img.width();
    }
    std::vector<bool> white_col(std::size_t(img.width()), false);
    for (int x = 0; x < img.width(); ++x) {
        int count = 0;
        for (int y = 0; y < img.height(); ++y) {
            count += is_background(img.at(x, y)) ? 1 : 0;
        }
        white_col[x] = count >= params.white_fraction * img.height();
    }

    if (std::all_of(white_row.begin(), white_row.end(), [](bool w) { return w; })) {
        return {};
    }

    const Segments rows = split_axis(white_row, params.min_band_px);
    const Segments cols = split_axis(white_col, params.min_band_px);

    std::vector<BoundingBox> out;
    for (const auto& [y0, y1] : rows.panels) {
        for (const auto& [x0, x1] : cols.panels) {
            out.push_back(BoundingBox{x0, y0, x1, y1});
        }
    }
    return out;
}

}  // namespace plotdig
