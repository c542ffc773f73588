#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "plotdig/detect.hpp"
#include "plotdig/geometry.hpp"

namespace plotdig {

struct Prediction {
    BoundingBox box;
    double confidence = 1.0;
};

// One ranked detection outcome after per-image matching; pooling these
// across a corpus and re-ranking gives the corpus PR curve.
struct RankedFlag {
    double confidence = 0.0;
    bool tp = false;
};

// Greedy matching: predictions by descending confidence, each taking the
// highest-IoU unmatched truth when that IoU reaches the threshold.
std::vector<RankedFlag> match_detections(const std::vector<Prediction>& predictions,
                                         const std::vector<BoundingBox>& truths,
                                         double iou_threshold);

// Area under the all-point interpolated precision-recall curve (precision
// envelope made non-increasing). Throws NoGroundTruth when truth_total < 1.
double ap_from_flags(std::vector<RankedFlag> flags, int truth_total);

double average_precision(const std::vector<Prediction>& predictions,
                         const std::vector<BoundingBox>& truths, double iou_threshold);

// Arithmetic mean over categories; throws EmptyInput on an empty mapping.
double mean_average_precision(const std::map<std::string, double>& ap_by_category);

// Mean AP over the threshold list; throws EmptyInput on an empty list.
double map_over_thresholds(const std::vector<Prediction>& predictions,
                           const std::vector<BoundingBox>& truths,
                           const std::vector<double>& thresholds);

std::vector<double> standard_thresholds();  // 0.50, 0.55, ..., 0.95

// Fraction of truth boxes of `category` matched one-to-one (greedy by IoU,
// descending) to a same-category prediction at IoU >= 0.7. Zero truths count
// as vacuously perfect.
double detection_accuracy(const std::vector<DetectedObject>& predictions,
                          const std::vector<DetectedObject>& truths, ObjectCategory category);

struct SeparationCase {
    int cluster_count = 0;
    int legend_count = 0;
    std::vector<double> pair_distances;  // matched line-to-legend RGB distances
};

// A chart counts correct when its cluster count equals its legend count and
// every matched color pair sits within the gate. Throws EmptyInput.
double separation_accuracy(const std::vector<SeparationCase>& cases, double color_gate = 60.0);

struct EvalReport {
    // category name -> threshold (formatted "0.50") -> AP
    std::map<std::string, std::map<std::string, double>> ap;
    double map_50 = 0.0;
    double map_50_95 = 0.0;
    double legend_marker_detection_accuracy = 0.0;
    double legend_text_detection_accuracy = 0.0;
    double data_line_separation_accuracy = 0.0;
    double legend_assignment_accuracy = 0.0;
    double value_fidelity_rate = 0.0;
    int charts_evaluated = 0;
    int series_truth_total = 0;
    int series_predicted_total = 0;
    std::vector<std::string> notes;
};

// Scores `<stem>.graph0.json` outputs in pred_dir against the
// `<stem>.truth.json` files in truth_dir. Detection rows are self-evaluation
// (the generator's annotations against themselves) since no trained detector
// exists here; the note list says so. Value fidelity gates per-chart RMSE at
// 2% of the truth y range.
EvalReport evaluate_corpus(const std::filesystem::path& pred_dir,
                           const std::filesystem::path& truth_dir, double color_gate = 60.0,
                           const std::vector<double>& thresholds = standard_thresholds());

std::string report_json(const EvalReport& report);

}  // namespace plotdig
