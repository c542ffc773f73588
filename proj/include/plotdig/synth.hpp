#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "plotdig/detect.hpp"
#include "plotdig/layout.hpp"
#include "plotdig/raster.hpp"
#include "plotdig/scale.hpp"

namespace plotdig {

// Full recipe for one rendered chart. Axis ranges must be representable with
// two decimals so tick labels round-trip exactly through their text form.
struct ChartSpec {
    std::uint64_t seed = 0;
    int width = 640;
    int height = 480;
    int line_count = 2;          // 1..5
    std::vector<Color> palette;  // one entry per line
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;
    int x_tick_count = 5;  // 3..8 each
    int y_tick_count = 5;
    bool legend = true;
    bool grid = false;
    bool frame = false;
    bool noise = false;  // halo-blend the data lines toward white
};

struct TruthSeries {
    std::string label;
    Color color;
    std::vector<PointXY> pixel_points;  // polyline breakpoints, image coords
    std::vector<PointXY> value_points;  // the same breakpoints in data units
};

// Everything a test needs to judge a digitizer run on this chart.
struct GroundTruth {
    std::vector<DetectedObject> annotations;
    GraphLayout layout;  // geometry as drawn
    std::vector<TruthSeries> series;
    AxisScale x_scale;
    AxisScale y_scale;
};

struct SynthOptions {
    double min_color_distance = 60.0;  // pairwise palette floor
    bool noise = false;
};

// Renders the chart and its ground truth. Identical specs give identical
// bytes: the only randomness comes from spec.seed. Throws InvalidSpec on
// out-of-range fields.
std::pair<RasterImage, GroundTruth> generate_chart(const ChartSpec& spec);

// Draws a plausible spec: 2..5 lines, constrained palette, random ticks,
// grid, and frame. The same seed always produces the same spec.
ChartSpec random_chart_spec(std::uint64_t seed, const SynthOptions& options = {});

// The single halo color a noise-mode line wears: a 1/16 blend toward white.
Color halo_color(Color c);

std::string annotations_json(int width, int height, const std::vector<DetectedObject>& objects);
std::string truth_json(const ChartSpec& spec, const GroundTruth& truth);
std::pair<ChartSpec, GroundTruth> parse_truth_json(const std::string& text);

// Writes chart_<i>.png / .ann.json / .truth.json triplets for i in [0, count).
void write_corpus(const std::filesystem::path& out_dir, int count, std::uint64_t seed,
                  const SynthOptions& options = {});

}  // namespace plotdig
