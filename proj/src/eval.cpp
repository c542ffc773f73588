#include "plotdig/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "plotdig/errors.hpp"
#include "plotdig/pipeline.hpp"
#include "plotdig/synth.hpp"

namespace plotdig {

namespace {

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileNotFound("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string format_threshold(double t)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", t);
    return buf;
}

// One-to-one pairs by descending IoU, floor 0.7; returns the matched count.
int greedy_box_matches(const std::vector<BoundingBox>& preds,
                       const std::vector<BoundingBox>& truths)
{
    struct Pair {
        double overlap;
        std::size_t p, t;
    };
    std::vector<Pair> pairs;
    for (std::size_t p = 0; p < preds.size(); ++p) {
        for (std::size_t t = 0; t < truths.size(); ++t) {
            const double overlap = iou(preds[p], truths[t]);
            if (overlap >= 0.7) {
                pairs.push_back({overlap, p, t});
            }
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.overlap != b.overlap) {
            return a.overlap > b.overlap;
        }
        return a.p != b.p ? a.p < b.p : a.t < b.t;
    });
    std::vector<bool> p_used(preds.size(), false), t_used(truths.size(), false);
    int matched = 0;
    for (const Pair& pair : pairs) {
        if (!p_used[pair.p] && !t_used[pair.t]) {
            p_used[pair.p] = t_used[pair.t] = true;
            ++matched;
        }
    }
    return matched;
}

std::vector<BoundingBox> boxes_of(const std::vector<DetectedObject>& objects,
                                  ObjectCategory category)
{
    std::vector<BoundingBox> out;
    for (const DetectedObject& obj : objects) {
        if (obj.category == category) {
            out.push_back(obj.box);
        }
    }
    return out;
}

// Piecewise-linear read of a truth polyline at x, clamped to its ends.
double polyline_value(const std::vector<PointXY>& points, double x)
{
    if (x <= points.front().x) {
        return points.front().y;
    }
    if (x >= points.back().x) {
        return points.back().y;
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (x <= points[i].x) {
            const PointXY& a = points[i - 1];
            const PointXY& b = points[i];
            const double t = (x - a.x) / (b.x - a.x);
            return a.y + t * (b.y - a.y);
        }
    }
    return points.back().y;
}

}  // namespace

std::vector<RankedFlag> match_detections(const std::vector<Prediction>& predictions,
                                         const std::vector<BoundingBox>& truths,
                                         double iou_threshold)
{
    std::vector<std::size_t> order(predictions.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return predictions[a].confidence > predictions[b].confidence;
    });

    std::vector<bool> used(truths.size(), false);
    std::vector<RankedFlag> flags;
    flags.reserve(predictions.size());
    for (std::size_t i : order) {
        double best = 0.0;
        int best_t = -1;
        for (std::size_t t = 0; t < truths.size(); ++t) {
            if (used[t]) {
                continue;
            }
            const double overlap = iou(predictions[i].box, truths[t]);
            if (overlap > best) {
                best = overlap;
                best_t = int(t);
            }
        }
        const bool tp = best_t >= 0 && best >= iou_threshold;
        if (tp) {
            used[std::size_t(best_t)] = true;
        }
        flags.push_back(RankedFlag{predictions[i].confidence, tp});
    }
    return flags;
}

double ap_from_flags(std::vector<RankedFlag> flags, int truth_total)
{
    if (truth_total < 1) {
        throw NoGroundTruth("average precision needs at least one truth box");
    }
    std::stable_sort(flags.begin(), flags.end(),
                     [](const RankedFlag& a, const RankedFlag& b) {
                         return a.confidence > b.confidence;
                     });
    std::vector<double> recall(flags.size()), precision(flags.size());
    int tp = 0, fp = 0;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        flags[i].tp ? ++tp : ++fp;
        recall[i] = double(tp) / truth_total;
        precision[i] = double(tp) / (tp + fp);
    }
    double envelope = 0.0;
    for (std::size_t i = flags.size(); i-- > 0;) {
        envelope = std::max(envelope, precision[i]);
        precision[i] = envelope;
    }
    double ap = 0.0, prev_recall = 0.0;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        ap += (recall[i] - prev_recall) * precision[i];
        prev_recall = recall[i];
    }
    return ap;
}

double average_precision(const std::vector<Prediction>& predictions,
                         const std::vector<BoundingBox>& truths, double iou_threshold)
{
    return ap_from_flags(match_detections(predictions, truths, iou_threshold),
                         int(truths.size()));
}

double mean_average_precision(const std::map<std::string, double>& ap_by_category)
{
    if (ap_by_category.empty()) {
        throw EmptyInput("mean over zero categories");
    }
    double sum = 0.0;
    for (const auto& [name, ap] : ap_by_category) {
        sum += ap;
    }
    return sum / double(ap_by_category.size());
}

double map_over_thresholds(const std::vector<Prediction>& predictions,
                           const std::vector<BoundingBox>& truths,
                           const std::vector<double>& thresholds)
{
    if (thresholds.empty()) {
        throw EmptyInput("mean over zero thresholds");
    }
    double sum = 0.0;
    for (double t : thresholds) {
        sum += average_precision(predictions, truths, t);
    }
    return sum / double(thresholds.size());
}

std::vector<double> standard_thresholds()
{
    std::vector<double> out;
    for (int i = 0; i < 10; ++i) {
        out.push_back(0.50 + 0.05 * i);
    }
    return out;
}

double detection_accuracy(const std::vector<DetectedObject>& predictions,
                          const std::vector<DetectedObject>& truths, ObjectCategory category)
{
    const std::vector<BoundingBox> truth_boxes = boxes_of(truths, category);
    if (truth_boxes.empty()) {
        return 1.0;
    }
    const std::vector<BoundingBox> pred_boxes = boxes_of(predictions, category);
    return double(greedy_box_matches(pred_boxes, truth_boxes)) / double(truth_boxes.size());
}

double separation_accuracy(const std::vector<SeparationCase>& cases, double color_gate)
{
    if (cases.empty()) {
        throw EmptyInput("no separation cases");
    }
    int correct = 0;
    for (const SeparationCase& c : cases) {
        const bool counts_match = c.cluster_count == c.legend_count;
        const bool colors_close = std::all_of(c.pair_distances.begin(), c.pair_distances.end(),
                                              [&](double d) { return d <= color_gate; });
        if (counts_match && colors_close) {
            ++correct;
        }
    }
    return double(correct) / double(cases.size());
}

EvalReport evaluate_corpus(const std::filesystem::path& pred_dir,
                           const std::filesystem::path& truth_dir, double color_gate,
                           const std::vector<double>& thresholds)
{
    if (thresholds.empty()) {
        throw EmptyInput("mean over zero thresholds");
    }
    std::vector<std::filesystem::path> truth_files;
    if (std::filesystem::is_directory(truth_dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(truth_dir)) {
            if (entry.is_regular_file()
                && entry.path().filename().string().ends_with(".truth.json")) {
                truth_files.push_back(entry.path());
            }
        }
    }
    std::sort(truth_files.begin(), truth_files.end());
    if (truth_files.empty()) {
        throw EmptyInput("no truth files in " + truth_dir.string());
    }

    // AP pooling wants 0.50 present whether or not the caller asked for it.
    std::vector<double> pool_thresholds = thresholds;
    if (std::find(pool_thresholds.begin(), pool_thresholds.end(), 0.50)
        == pool_thresholds.end()) {
        pool_thresholds.push_back(0.50);
    }
    std::map<std::string, std::vector<std::vector<RankedFlag>>> pooled;  // per threshold
    std::map<std::string, int> truth_counts;

    int marker_matched = 0, marker_total = 0;
    int text_matched = 0, text_total = 0;
    std::vector<SeparationCase> cases;
    int assignment_correct = 0;
    int fidelity_pass = 0;
    int missing_predictions = 0;

    EvalReport report;
    for (const std::filesystem::path& truth_path : truth_files) {
        const auto [spec, truth] = parse_truth_json(read_file(truth_path));
        std::string stem = truth_path.filename().string();
        stem.erase(stem.size() - std::string(".truth.json").size());

        // Detection scoring: the generator's annotations against themselves.
        const std::vector<DetectedObject>& ann = truth.annotations;
        for (const DetectedObject& obj : ann) {
            truth_counts[std::string(category_name(obj.category))]++;
        }
        std::map<std::string, std::vector<Prediction>> preds_by_cat;
        std::map<std::string, std::vector<BoundingBox>> truths_by_cat;
        for (const DetectedObject& obj : ann) {
            const std::string name(category_name(obj.category));
            preds_by_cat[name].push_back(Prediction{obj.box, obj.confidence});
            truths_by_cat[name].push_back(obj.box);
        }
        for (const auto& [name, boxes] : truths_by_cat) {
            auto& per_threshold = pooled[name];
            per_threshold.resize(pool_thresholds.size());
            for (std::size_t ti = 0; ti < pool_thresholds.size(); ++ti) {
                const std::vector<RankedFlag> flags =
                    match_detections(preds_by_cat[name], boxes, pool_thresholds[ti]);
                per_threshold[ti].insert(per_threshold[ti].end(), flags.begin(), flags.end());
            }
        }
        {
            const auto marker_boxes = boxes_of(ann, ObjectCategory::Marker);
            const auto legend_boxes = boxes_of(ann, ObjectCategory::Legend);
            marker_total += int(marker_boxes.size());
            marker_matched += greedy_box_matches(marker_boxes, marker_boxes);
            text_total += int(legend_boxes.size());
            text_matched += greedy_box_matches(legend_boxes, legend_boxes);
        }

        // Digitizer output vs truth series.
        report.series_truth_total += int(truth.series.size());
        SeparationCase sep;
        sep.legend_count = int(truth.series.size());
        const std::filesystem::path pred_path = pred_dir / (stem + ".graph0.json");
        if (!std::filesystem::exists(pred_path)) {
            ++missing_predictions;
            cases.push_back(std::move(sep));
            ++report.charts_evaluated;
            continue;
        }
        const DigitizedGraph graph = parse_graph_json(read_file(pred_path));
        sep.cluster_count = int(graph.series.size());
        report.series_predicted_total += int(graph.series.size());

        struct ColorPair {
            double dist;
            std::size_t p, t;
        };
        std::vector<ColorPair> pairs;
        for (std::size_t p = 0; p < graph.series.size(); ++p) {
            for (std::size_t t = 0; t < truth.series.size(); ++t) {
                pairs.push_back(
                    {color_distance(graph.series[p].color, truth.series[t].color), p, t});
            }
        }
        std::sort(pairs.begin(), pairs.end(), [](const ColorPair& a, const ColorPair& b) {
            if (a.dist != b.dist) {
                return a.dist < b.dist;
            }
            return a.p != b.p ? a.p < b.p : a.t < b.t;
        });
        std::vector<int> match_of(graph.series.size(), -1);
        std::vector<bool> t_used(truth.series.size(), false);
        for (const ColorPair& pair : pairs) {
            if (match_of[pair.p] < 0 && !t_used[pair.t]) {
                match_of[pair.p] = int(pair.t);
                t_used[pair.t] = true;
                sep.pair_distances.push_back(pair.dist);
            }
        }

        const bool counts_match = sep.cluster_count == sep.legend_count;
        bool labels_ok = counts_match;
        double sq_sum = 0.0;
        std::int64_t sq_n = 0;
        for (std::size_t p = 0; p < graph.series.size(); ++p) {
            if (match_of[p] < 0) {
                continue;
            }
            const TruthSeries& ts = truth.series[std::size_t(match_of[p])];
            const SeriesRecord& ps = graph.series[p];
            if (ps.label.source != LabelSource::LegendMatch || !ps.label.label
                || *ps.label.label != ts.label) {
                labels_ok = false;
            }
            for (const PointXY& point : ps.points) {
                const double expected = polyline_value(ts.value_points, point.x);
                sq_sum += (point.y - expected) * (point.y - expected);
                ++sq_n;
            }
        }
        if (labels_ok) {
            ++assignment_correct;
        }
        if (counts_match && sq_n > 0) {
            const double rmse = std::sqrt(sq_sum / double(sq_n));
            if (rmse <= 0.02 * (spec.y_max - spec.y_min)) {
                ++fidelity_pass;
            }
        }
        cases.push_back(std::move(sep));
        ++report.charts_evaluated;
    }

    // Per-category AP tables and the two mAP summaries.
    std::map<std::string, double> ap50;
    std::map<std::string, double> ap_mean;
    for (auto& [name, per_threshold] : pooled) {
        const int total = truth_counts[name];
        double sum = 0.0;
        int counted = 0;
        for (std::size_t ti = 0; ti < pool_thresholds.size(); ++ti) {
            const double ap = ap_from_flags(per_threshold[ti], total);
            if (pool_thresholds[ti] == 0.50) {
                ap50[name] = ap;
            }
            const bool requested = ti < thresholds.size();
            if (requested) {
                report.ap[name][format_threshold(pool_thresholds[ti])] = ap;
                sum += ap;
                ++counted;
            }
        }
        ap_mean[name] = sum / double(counted);
    }
    report.map_50 = mean_average_precision(ap50);
    report.map_50_95 = mean_average_precision(ap_mean);

    report.legend_marker_detection_accuracy =
        marker_total == 0 ? 1.0 : double(marker_matched) / marker_total;
    report.legend_text_detection_accuracy =
        text_total == 0 ? 1.0 : double(text_matched) / text_total;
    report.data_line_separation_accuracy = separation_accuracy(cases, color_gate);
    report.legend_assignment_accuracy = double(assignment_correct) / double(cases.size());
    report.value_fidelity_rate = double(fidelity_pass) / double(cases.size());

    report.notes.push_back(
        "detection rows are self-evaluation: generator annotations scored against themselves");
    if (marker_total == 0 || text_total == 0) {
        report.notes.push_back("a detection category had zero truths; accuracy is vacuous 1.0");
    }
    if (missing_predictions > 0) {
        report.notes.push_back(std::to_string(missing_predictions)
                               + " truth chart(s) had no prediction file");
    }
    return report;
}

std::string report_json(const EvalReport& report)
{
    nlohmann::ordered_json doc;
    doc["ap"] = nlohmann::ordered_json::object();
    for (const auto& [category, row] : report.ap) {
        nlohmann::ordered_json entry = nlohmann::ordered_json::object();
        for (const auto& [threshold, ap] : row) {
            entry[threshold] = ap;
        }
        doc["ap"][category] = std::move(entry);
    }
    doc["map_50"] = report.map_50;
    doc["map_50_95"] = report.map_50_95;
    doc["legend_marker_detection_accuracy"] = report.legend_marker_detection_accuracy;
    doc["legend_text_detection_accuracy"] = report.legend_text_detection_accuracy;
    doc["data_line_separation_accuracy"] = report.data_line_separation_accuracy;
    doc["legend_assignment_accuracy"] = report.legend_assignment_accuracy;
    doc["value_fidelity_rate"] = report.value_fidelity_rate;
    doc["counts"] = {{"charts", report.charts_evaluated},
                     {"truth_series", report.series_truth_total},
                     {"predicted_series", report.series_predicted_total}};
    doc["notes"] = report.notes;
    return doc.dump(2) + "\n";
}

}  // namespace plotdig
