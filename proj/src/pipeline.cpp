#include "plotdig/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "plotdig/cleanup.hpp"
#include "plotdig/errors.hpp"
#include "plotdig/image_io.hpp"
#include "plotdig/layout.hpp"
#include "plotdig/lines.hpp"

namespace plotdig {

namespace {

std::string to_lower_ascii(std::string_view s)
{
    std::string out(s);
    for (char& c : out) {
        c = char(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

void add_flag(std::vector<std::string>& flags, std::string flag)
{
    if (std::find(flags.begin(), flags.end(), flag) == flags.end()) {
        flags.push_back(std::move(flag));
    }
}

// Marker swatches paired with their nearest caption, left to right in
// detection order. Markers whose box holds no ink are skipped.
std::vector<LegendEntry> build_legend_entries(const RasterImage& img,
                                              const std::vector<DetectedObject>& objects,
                                              int whiten_threshold)
{
    std::vector<const DetectedObject*> markers;
    std::vector<const DetectedObject*> captions;
    for (const DetectedObject& obj : objects) {
        if (obj.category == ObjectCategory::Marker) {
            markers.push_back(&obj);
        } else if (obj.category == ObjectCategory::Legend) {
            captions.push_back(&obj);
        }
    }

    std::vector<LegendEntry> entries;
    std::vector<bool> used(captions.size(), false);
    for (const DetectedObject* marker : markers) {
        const std::optional<Color> color = mean_ink_color(img, marker->box, whiten_threshold);
        if (!color) {
            continue;
        }
        LegendEntry entry;
        entry.marker_color = *color;
        entry.marker_box = marker->box;
        // Distance from the marker center to the caption box itself; center
        // distance would drift with the caption's text width.
        const double mx = marker->box.center_x();
        const double my = marker->box.center_y();
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < captions.size(); ++j) {
            if (used[j]) {
                continue;
            }
            const BoundingBox& b = captions[j]->box;
            const double dx = std::max({double(b.x_min) - mx, 0.0, mx - double(b.x_max - 1)});
            const double dy = std::max({double(b.y_min) - my, 0.0, my - double(b.y_max - 1)});
            const double d = std::hypot(dx, dy);
            if (d < best_dist) {
                best_dist = d;
                best = int(j);
            }
        }
        if (best >= 0) {
            used[std::size_t(best)] = true;
            entry.label = captions[std::size_t(best)]->text.value_or("");
            entry.label_box = captions[std::size_t(best)]->box;
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

// Legend bijection first; in-region caption texts as fallback; Anonymous for
// whatever stays unlabeled.
std::vector<SeriesLabel> label_clusters(const RasterImage& img,
                                        const std::vector<DetectedObject>& objects,
                                        const std::vector<LegendEntry>& entries,
                                        const std::vector<LineCluster>& clusters,
                                        const BoundingBox& data_region,
                                        const PipelineConfig& config,
                                        std::vector<std::string>& flags)
{
    std::vector<SeriesLabel> labels(clusters.size());
    bool legend_done = false;
    if (!entries.empty()) {
        if (entries.size() == clusters.size()) {
            try {
                for (const LegendAssignment& a : assign_legends(clusters, entries)) {
                    if (a.cluster_id < 0 || a.cluster_id >= int(labels.size())) {
                        continue;
                    }
                    SeriesLabel& label = labels[std::size_t(a.cluster_id)];
                    label.source = LabelSource::LegendMatch;
                    label.label = entries[std::size_t(a.legend_index)].label;
                    label.confidence = std::clamp(a.similarity, 0.0, 1.0);
                }
                legend_done = true;
            } catch (const AmbiguousAssignment&) {
                add_flag(flags, "ambiguous-legend");
            } catch (const ZeroVector&) {
                add_flag(flags, "zero-color");
            }
        } else {
            add_flag(flags, "count-mismatch");
        }
    }
    if (legend_done) {
        return labels;
    }

    std::vector<DetectedObject> texts;
    for (const DetectedObject& obj : objects) {
        if (obj.category == ObjectCategory::Text && obj.text && !obj.text->empty()
            && data_region.contains(int(obj.box.center_x()), int(obj.box.center_y()))) {
            texts.push_back(obj);
        }
    }
    if (!texts.empty()) {
        const TextMatchWeights weights{config.match_w_dist, config.match_w_color,
                                       config.match_bias};
        const std::vector<std::optional<int>> target =
            match_texts(img, texts, clusters, data_region, weights);
        for (std::size_t t = 0; t < texts.size(); ++t) {
            if (!target[t]) {
                continue;
            }
            const std::size_t c = std::size_t(*target[t]);
            const double score =
                text_match_score(img, texts[t], clusters[c], data_region, weights);
            if (labels[c].source == LabelSource::Anonymous || score > labels[c].confidence) {
                labels[c].source = LabelSource::TextMatch;
                labels[c].label = texts[t].text;
                labels[c].confidence = score;
            }
        }
    }
    return labels;
}

struct AxisTexts {
    std::vector<NumericLabel> numerics;
    std::optional<std::string> title;
};

// Texts centered in the axis label band: numbers become scale anchors, the
// longest non-number becomes the axis title (ties: smaller anchor).
AxisTexts gather_axis_texts(const std::vector<DetectedObject>& objects,
                            const std::optional<BoundingBox>& region, AxisKind kind)
{
    AxisTexts out;
    if (!region) {
        return out;
    }
    double title_anchor = std::numeric_limits<double>::infinity();
    for (const DetectedObject& obj : objects) {
        if (obj.category != ObjectCategory::Text || !obj.text || obj.text->empty()) {
            continue;
        }
        const double cx = obj.box.center_x();
        const double cy = obj.box.center_y();
        if (!region->contains(int(cx), int(cy))) {
            continue;
        }
        const double anchor = kind == AxisKind::X ? cx : cy;
        try {
            const double value = parse_numeric(*obj.text);
            out.numerics.push_back(NumericLabel{*obj.text, value, anchor});
        } catch (const NonNumeric&) {
            const bool better = !out.title || obj.text->size() > out.title->size()
                || (obj.text->size() == out.title->size() && anchor < title_anchor);
            if (better) {
                out.title = *obj.text;
                title_anchor = anchor;
            }
        }
    }
    return out;
}

AxisScale build_axis_scale(const AxisTexts& texts, const AxisLine& axis, double tolerance,
                           std::vector<std::string>& flags)
{
    if (texts.numerics.size() >= 3) {
        try {
            if (validate_arithmetic(texts.numerics, tolerance)) {
                AxisScale scale = fit_axis_scale(texts.numerics, axis, tolerance);
                scale.label = texts.title;
                return scale;
            }
            if (looks_geometric(texts.numerics, tolerance)) {
                add_flag(flags, "suspected-log");
            }
        } catch (const Error&) {
            // fall through to the normalized fallback
        }
    }
    AxisScale scale = make_normalized_scale(axis);
    scale.label = texts.title;
    add_flag(flags, "normalized");
    return scale;
}

DigitizedGraph digitize_panel(const RasterImage& img,
                              const std::vector<DetectedObject>& objects,
                              const PipelineConfig& config)
{
    DigitizedGraph graph;
    try {
        const GraphLayout layout = analyze_layout(img);
        const std::vector<LegendEntry> entries =
            build_legend_entries(img, objects, config.whiten_threshold);

        RasterImage cleaned = erase_objects(img, objects);
        cleaned = erase_layout_artifacts(cleaned, layout, config.whiten_threshold);

        const std::vector<PixelPoint> points =
            collect_colored_pixels(cleaned, layout.data_region, config.whiten_threshold);
        DbscanParams params = calibrate_params(points, layout.data_region);
        params.eps = config.dbscan_eps;
        if (config.dbscan_min_pts > 0) {
            params.min_pts = config.dbscan_min_pts;
        }
        const std::vector<LineCluster> clusters =
            dbscan_cluster(points, params, config.assign_noise_to_nearest);

        const std::vector<SeriesLabel> labels = label_clusters(
            img, objects, entries, clusters, layout.data_region, config, graph.flags);

        const AxisTexts x_texts = gather_axis_texts(objects, layout.x_label_region, AxisKind::X);
        const AxisTexts y_texts = gather_axis_texts(objects, layout.y_label_region, AxisKind::Y);
        graph.x_axis =
            build_axis_scale(x_texts, layout.x_axis, config.arith_tolerance, graph.flags);
        graph.y_axis =
            build_axis_scale(y_texts, layout.y_axis, config.arith_tolerance, graph.flags);
        if (graph.y_axis.kind == ScaleKind::Normalized) {
            // Rows grow downward; flip so the axis origin reads 0, the top 1.
            graph.y_axis.slope = -graph.y_axis.slope;
            graph.y_axis.intercept = 1.0 - graph.y_axis.intercept;
        }

        for (std::size_t i = 0; i < clusters.size(); ++i) {
            SeriesRecord record;
            record.label = labels[i];
            record.color = clusters[i].representative_color;
            record.points = rescale_series(trace_series(clusters[i], layout.data_region),
                                           graph.x_axis, graph.y_axis);
            graph.series.push_back(std::move(record));
        }
    } catch (const AxesNotFound&) {
        graph.series.clear();
        add_flag(graph.flags, "axes-not-found");
    } catch (const DegenerateRegion&) {
        graph.series.clear();
        add_flag(graph.flags, "degenerate-region");
    } catch (const EmptyInput&) {
        graph.series.clear();
        add_flag(graph.flags, "no-data-pixels");
    } catch (const Error&) {
        graph.series.clear();
        add_flag(graph.flags, "stage-error");
    }
    return graph;
}

// --- JSON writing -----------------------------------------------------------

void append_escaped(std::string& out, std::string_view text)
{
    out += '"';
    for (char ch : text) {
        const unsigned char u = static_cast<unsigned char>(ch);
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (u < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", u);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += '"';
}

void append_double(std::string& out, double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    out += buf;
}

void append_axis(std::string& out, const AxisScale& axis)
{
    out += "{\"kind\": ";
    out += axis.kind == ScaleKind::Linear ? "\"linear\"" : "\"normalized\"";
    out += ", \"label\": ";
    append_escaped(out, axis.label.value_or(""));
    out += ", \"slope\": ";
    append_double(out, axis.slope);
    out += ", \"intercept\": ";
    append_double(out, axis.intercept);
    out += "}";
}

std::string_view source_name(LabelSource source)
{
    switch (source) {
        case LabelSource::LegendMatch: return "legend";
        case LabelSource::TextMatch: return "text";
        case LabelSource::Anonymous: break;
    }
    return "anonymous";
}

}  // namespace

std::vector<DigitizedGraph> digitize_figure(const RasterImage& img,
                                            const std::vector<DetectedObject>& annotations,
                                            const PipelineConfig& config,
                                            const std::string& source)
{
    std::vector<BoundingBox> panels;
    std::vector<DetectedObject> in_graph;
    bool any_panel_annotation = false;
    for (const DetectedObject& obj : annotations) {
        if (is_subfigure_category(obj.category)) {
            any_panel_annotation = true;
            if (obj.category != ObjectCategory::NonGraph) {
                panels.push_back(obj.box);
            }
        } else {
            in_graph.push_back(obj);
        }
    }
    if (!any_panel_annotation) {
        panels = heuristic_gutter_split(
            img, GutterParams{config.whiten_threshold, config.gutter_white_fraction,
                              config.gutter_min_band_px});
    }

    std::vector<DigitizedGraph> out;
    const BoundingBox full{0, 0, img.width(), img.height()};
    for (const BoundingBox& raw : panels) {
        const BoundingBox panel = intersect(raw, full);
        if (!panel.valid()) {
            continue;
        }
        std::vector<DetectedObject> local;
        for (const DetectedObject& obj : in_graph) {
            if (!panel.contains(int(obj.box.center_x()), int(obj.box.center_y()))) {
                continue;
            }
            DetectedObject shifted = obj;
            const BoundingBox clipped = intersect(obj.box, panel);
            if (!clipped.valid()) {
                continue;
            }
            shifted.box = BoundingBox{clipped.x_min - panel.x_min, clipped.y_min - panel.y_min,
                                      clipped.x_max - panel.x_min, clipped.y_max - panel.y_min};
            local.push_back(std::move(shifted));
        }
        DigitizedGraph graph = digitize_panel(crop(img, panel), local, config);
        graph.source_figure = source;
        graph.subfigure_index = int(out.size());
        out.push_back(std::move(graph));
    }
    return out;
}

std::string graph_json(const DigitizedGraph& graph)
{
    std::string out = "{\"source\": ";
    append_escaped(out, graph.source_figure);
    out += ", \"subfigure\": ";
    out += std::to_string(graph.subfigure_index);
    out += ", \"x_axis\": ";
    append_axis(out, graph.x_axis);
    out += ", \"y_axis\": ";
    append_axis(out, graph.y_axis);
    out += ", \"series\": [";
    for (std::size_t i = 0; i < graph.series.size(); ++i) {
        const SeriesRecord& s = graph.series[i];
        if (i > 0) {
            out += ", ";
        }
        out += "{\"label\": ";
        if (s.label.label) {
            append_escaped(out, *s.label.label);
        } else {
            out += "null";
        }
        out += ", \"label_source\": \"";
        out += source_name(s.label.source);
        out += "\", \"confidence\": ";
        append_double(out, s.label.confidence);
        out += ", \"color\": [";
        out += std::to_string(int(s.color.r)) + ", " + std::to_string(int(s.color.g)) + ", "
            + std::to_string(int(s.color.b));
        out += "], \"points\": [";
        for (std::size_t p = 0; p < s.points.size(); ++p) {
            if (p > 0) {
                out += ", ";
            }
            out += "[";
            append_double(out, s.points[p].x);
            out += ", ";
            append_double(out, s.points[p].y);
            out += "]";
        }
        out += "]}";
    }
    out += "], \"flags\": [";
    for (std::size_t i = 0; i < graph.flags.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        append_escaped(out, graph.flags[i]);
    }
    out += "]}\n";
    return out;
}

DigitizedGraph parse_graph_json(const std::string& text)
{
    const nlohmann::json doc = nlohmann::json::parse(text);
    DigitizedGraph graph;
    graph.source_figure = doc.at("source").get<std::string>();
    graph.subfigure_index = doc.at("subfigure").get<int>();
    auto read_axis = [](const nlohmann::json& j) {
        AxisScale axis;
        axis.kind = j.at("kind").get<std::string>() == "linear" ? ScaleKind::Linear
                                                                : ScaleKind::Normalized;
        axis.label = j.at("label").get<std::string>();
        axis.slope = j.at("slope").get<double>();
        axis.intercept = j.at("intercept").get<double>();
        return axis;
    };
    graph.x_axis = read_axis(doc.at("x_axis"));
    graph.y_axis = read_axis(doc.at("y_axis"));
    for (const auto& rec : doc.at("series")) {
        SeriesRecord s;
        if (!rec.at("label").is_null()) {
            s.label.label = rec.at("label").get<std::string>();
        }
        const std::string src = rec.at("label_source").get<std::string>();
        s.label.source = src == "legend" ? LabelSource::LegendMatch
            : src == "text"              ? LabelSource::TextMatch
                                         : LabelSource::Anonymous;
        s.label.confidence = rec.at("confidence").get<double>();
        s.color = Color{rec.at("color").at(0).get<std::uint8_t>(),
                        rec.at("color").at(1).get<std::uint8_t>(),
                        rec.at("color").at(2).get<std::uint8_t>()};
        for (const auto& p : rec.at("points")) {
            s.points.push_back(PointXY{p.at(0).get<double>(), p.at(1).get<double>()});
        }
        graph.series.push_back(std::move(s));
    }
    for (const auto& f : doc.at("flags")) {
        graph.flags.push_back(f.get<std::string>());
    }
    return graph;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) {
            throw Error("cannot write " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::vector<ItemResult> digitize_directory(const std::filesystem::path& input_dir,
                                           const std::filesystem::path& out_dir,
                                           const PipelineConfig& config)
{
    if (!std::filesystem::is_directory(input_dir)) {
        throw FileNotFound("input directory not found: " + input_dir.string());
    }
    std::filesystem::create_directories(out_dir);

    std::vector<std::filesystem::path> inputs;
    for (const auto& entry : std::filesystem::directory_iterator(input_dir)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        const std::string ext = to_lower_ascii(entry.path().extension().string());
        if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") {
            inputs.push_back(entry.path());
        }
    }
    std::sort(inputs.begin(), inputs.end(),
              [](const auto& a, const auto& b) { return a.filename() < b.filename(); });

    std::vector<ItemResult> results(inputs.size());
    auto process = [&](std::size_t i) {
        ItemResult item;
        item.input = inputs[i];
        try {
            const RasterImage img = load_image(inputs[i]);
            const std::string stem = inputs[i].stem().string();
            std::vector<DetectedObject> annotations;
            const std::filesystem::path ann = input_dir / (stem + ".ann.json");
            if (std::filesystem::exists(ann)) {
                annotations = parse_annotations(ann, img);
            }
            for (const DigitizedGraph& graph : digitize_figure(img, annotations, config, stem)) {
                const std::filesystem::path out_path = out_dir
                    / (stem + ".graph" + std::to_string(graph.subfigure_index) + ".json");
                write_text_atomic(out_path, graph_json(graph));
                ++item.graphs_written;
            }
            const std::filesystem::path caption = input_dir / (stem + ".caption.txt");
            if (std::filesystem::exists(caption)) {
                std::filesystem::copy_file(caption, out_dir / caption.filename(),
                                           std::filesystem::copy_options::overwrite_existing);
            }
        } catch (const std::exception& e) {
            item.ok = false;
            item.message = e.what();
        }
        results[i] = std::move(item);
    };

    const int jobs = std::max(1, config.jobs);
    if (jobs == 1 || inputs.size() <= 1) {
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            process(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        const int n = std::min<int>(jobs, int(inputs.size()));
        for (int w = 0; w < n; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < inputs.size();
                     i = next.fetch_add(1)) {
                    process(i);
                }
            });
        }
        for (std::thread& t : workers) {
            t.join();
        }
    }
    return results;
}

bool filter_by_caption(const std::string& caption, const std::vector<std::string>& keywords)
{
    const std::string haystack = to_lower_ascii(caption);
    for (const std::string& keyword : keywords) {
        if (keyword.empty()) {
            continue;
        }
        if (haystack.find(to_lower_ascii(keyword)) != std::string::npos) {
            return true;
        }
    }
    return false;
}

double label_distance_ratio(const std::string& label, const std::string& target)
{
    const std::string l = to_lower_ascii(label);
    const std::string t = to_lower_ascii(target);
    if (t.empty()) {
        return 0.0;
    }
    if (l.size() >= t.size()) {
        int best = std::numeric_limits<int>::max();
        for (std::size_t i = 0; i + t.size() <= l.size(); ++i) {
            best = std::min(best, levenshtein(std::string_view(l).substr(i, t.size()), t));
        }
        return double(best) / double(t.size());
    }
    return double(levenshtein(l, t)) / double(t.size());
}

bool filter_by_axis(const DigitizedGraph& graph, const std::string& x_label_target,
                    const std::string& y_label_target, double max_edit_ratio,
                    std::optional<double> x_max_limit)
{
    auto label_ok = [&](const AxisScale& axis, const std::string& target) {
        if (target.empty()) {
            return true;
        }
        if (!axis.label || axis.label->empty()) {
            return false;
        }
        return label_distance_ratio(*axis.label, target) <= max_edit_ratio;
    };
    if (!label_ok(graph.x_axis, x_label_target) || !label_ok(graph.y_axis, y_label_target)) {
        return false;
    }
    if (x_max_limit) {
        if (graph.x_axis.kind == ScaleKind::Normalized) {
            return false;
        }
        double max_x = -std::numeric_limits<double>::infinity();
        bool any = false;
        for (const SeriesRecord& s : graph.series) {
            for (const PointXY& p : s.points) {
                max_x = std::max(max_x, p.x);
                any = true;
            }
        }
        if (!any || max_x > *x_max_limit) {
            return false;
        }
    }
    return true;
}

}  // namespace plotdig
