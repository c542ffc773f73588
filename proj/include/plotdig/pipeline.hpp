#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "plotdig/config.hpp"
#include "plotdig/detect.hpp"
#include "plotdig/match.hpp"
#include "plotdig/raster.hpp"
#include "plotdig/scale.hpp"

namespace plotdig {

struct SeriesRecord {
    SeriesLabel label;
    Color color;  // cluster representative
    std::vector<PointXY> points;
};

// One digitized graph panel: value-space series plus the axis maps that
// produced them. Warnings accumulate in `flags`; a failed panel keeps its
// flags and an empty series list instead of aborting the figure.
struct DigitizedGraph {
    std::string source_figure;
    int subfigure_index = 0;
    AxisScale x_axis;
    AxisScale y_axis;
    std::vector<SeriesRecord> series;
    std::vector<std::string> flags;
};

// Runs layout, cleanup, clustering, matching, and scaling on every graph
// panel of one figure. Panels come from Graph/SubGraph annotations, or from
// the white-gutter heuristic when no panel annotation exists; NonGraph
// panels are skipped. Never throws for per-panel trouble: each failure
// becomes a flagged record.
std::vector<DigitizedGraph> digitize_figure(const RasterImage& img,
                                            const std::vector<DetectedObject>& annotations,
                                            const PipelineConfig& config,
                                            const std::string& source = "");

// Serializes with a fixed key order, ": "/", " separators, %.9g floats, and
// a trailing LF, so identical graphs give identical bytes.
std::string graph_json(const DigitizedGraph& graph);
DigitizedGraph parse_graph_json(const std::string& text);

// Writes to `<path>.tmp`, then renames over `path`.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

struct ItemResult {
    std::filesystem::path input;
    bool ok = true;
    std::string message;  // failure reason when !ok
    int graphs_written = 0;
};

// Digitizes every *.png/*.jpg/*.jpeg in `input_dir` (sorted by name), using
// `<stem>.ann.json` sidecars when present, and writes one
// `<stem>.graph<k>.json` per panel into `out_dir`. Caption sidecars
// (`<stem>.caption.txt`) are copied along so the output directory filters on
// its own. Item failures are reported, never thrown; `config.jobs` figures
// run concurrently.
std::vector<ItemResult> digitize_directory(const std::filesystem::path& input_dir,
                                           const std::filesystem::path& out_dir,
                                           const PipelineConfig& config);

// True when any keyword occurs in the caption, ASCII case-insensitively.
bool filter_by_caption(const std::string& caption, const std::vector<std::string>& keywords);

// Minimum edit distance between the target and any equal-length window of
// the label (the whole label when it is shorter), over the target length.
// Case-insensitive; 0 for an empty target.
double label_distance_ratio(const std::string& label, const std::string& target);

// Axis-label and x-range screen for mined graphs. Empty targets pass; a
// missing label fails a non-empty target; an x_max_limit rejects normalized
// x axes and graphs whose largest x exceeds the limit (or that have no
// points at all).
bool filter_by_axis(const DigitizedGraph& graph, const std::string& x_label_target,
                    const std::string& y_label_target, double max_edit_ratio,
                    std::optional<double> x_max_limit);

}  // namespace plotdig
