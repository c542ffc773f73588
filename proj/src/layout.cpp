#include "plotdig/layout.hpp"

#include <algorithm>
#include <cmath>

#include "plotdig/errors.hpp"

namespace plotdig {

namespace {

constexpr int kDarkLuma = 128;
constexpr int kGraySpan = 20;         // max-min channel spread for gray lines
constexpr int kBackground = 245;      // channel floor treated as background
constexpr double kLengthFloor = 0.5;  // axis run length vs. scanned dimension
constexpr double kPeripheryLambda = 2.0;
constexpr int kProgressionTol = 2;

bool is_dark(Color c)
{
    return luma(c) < kDarkLuma;
}

bool is_grayish(Color c)
{
    return saturation_span(c) <= kGraySpan && luma(c) >= kDarkLuma
        && std::min({int(c.r), int(c.g), int(c.b)}) < kBackground;
}

struct Run {
    int start = 0;
    int end = 0;  // half-open
    int length() const { return end - start; }
};

template <typename PixelAt>
Run longest_run(int n, PixelAt&& dark_at)
{
    Run best;
    int pos = 0;
    while (pos < n) {
        if (!dark_at(pos)) {
            ++pos;
            continue;
        }
        int end = pos;
        while (end < n && dark_at(end)) {
            ++end;
        }
        if (end - pos > best.length()) {
            best = Run{pos, end};
        }
        pos = end;
    }
    return best;
}

struct Candidate {
    int position = 0;
    Run run;
};

std::vector<Candidate> row_candidates(const RasterImage& img)
{
    std::vector<Candidate> out;
    for (int y = 0; y < img.height(); ++y) {
        const Run run = longest_run(img.width(), [&](int x) { return is_dark(img.at(x, y)); });
        if (run.length() >= kLengthFloor * img.width()) {
            out.push_back(Candidate{y, run});
        }
    }
    return out;
}

std::vector<Candidate> column_candidates(const RasterImage& img)
{
    std::vector<Candidate> out;
    for (int x = 0; x < img.width(); ++x) {
        const Run run = longest_run(img.height(), [&](int y) { return is_dark(img.at(x, y)); });
        if (run.length() >= kLengthFloor * img.height()) {
            out.push_back(Candidate{x, run});
        }
    }
    return out;
}

double mean_saturation_row(const RasterImage& img, int y, const Run& run)
{
    double sum = 0;
    for (int x = run.start; x < run.end; ++x) {
        sum += saturation_span(img.at(x, y));
    }
    return sum / std::max(1, run.length());
}

double mean_saturation_col(const RasterImage& img, int x, const Run& run)
{
    double sum = 0;
    for (int y = run.start; y < run.end; ++y) {
        sum += saturation_span(img.at(x, y));
    }
    return sum / std::max(1, run.length());
}

int overlap(const Run& a, const Run& b)
{
    return std::max(0, std::min(a.end, b.end) - std::max(a.start, b.start));
}

// Coordinates of perpendicular marks attached to one side of an axis line.
// `probe(coord, depth)` reads the pixel `depth` steps away from the axis at
// position `coord` along it, or returns false past the image edge.
template <typename Probe>
std::vector<int> tick_marks(int span_start, int span_end, int min_len, int max_len, Probe&& probe)
{
    std::vector<bool> marked(std::size_t(span_end - span_start), false);
    for (int c = span_start; c < span_end; ++c) {
        int len = 0;
        while (len < max_len + 1 && probe(c, len + 1)) {
            ++len;
        }
        marked[std::size_t(c - span_start)] = len >= min_len && len <= max_len;
    }

    std::vector<int> coords;
    int i = 0;
    const int n = int(marked.size());
    while (i < n) {
        if (!marked[i]) {
            ++i;
            continue;
        }
        int j = i;
        while (j < n && marked[j]) {
            ++j;
        }
        coords.push_back(span_start + (i + j - 1) / 2);
        i = j;
    }
    return coords;
}

}  // namespace

std::vector<int> largest_arithmetic_subset(const std::vector<int>& coords, int tolerance)
{
    std::vector<int> sorted = coords;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const int n = int(sorted.size());
    if (n < 2) {
        return {};
    }

    std::vector<int> best;
    double best_step = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            std::vector<int> members = {sorted[i], sorted[j]};
            double step = sorted[j] - sorted[i];
            if (step <= 0) {
                continue;
            }
            int k = j + 1;
            while (k < n) {
                const double target = sorted[i] + step * members.size();
                int chosen = -1;
                double chosen_err = tolerance + 1;
                for (int m = k; m < n; ++m) {
                    const double err = std::abs(sorted[m] - target);
                    if (err <= tolerance && err < chosen_err) {
                        chosen_err = err;
                        chosen = m;
                    }
                    if (sorted[m] > target + tolerance) {
                        break;
                    }
                }
                if (chosen < 0) {
                    break;
                }
                members.push_back(sorted[chosen]);
                // Refine the step so rounding drift does not accumulate.
                step = double(sorted[chosen] - sorted[i]) / (members.size() - 1);
                k = chosen + 1;
            }
            const bool better = members.size() > best.size()
                || (members.size() == best.size() && !best.empty()
                    && (step < best_step
                        || (step == best_step && members.front() < best.front())));
            if (better) {
                best = members;
                best_step = step;
            }
        }
    }
    return best;
}

std::pair<AxisLine, AxisLine> detect_axes(const RasterImage& img)
{
    const auto rows = row_candidates(img);
    const auto cols = column_candidates(img);
    if (rows.empty() || cols.empty()) {
        throw AxesNotFound("no line long enough to be an axis");
    }

    auto pick = [](const std::vector<Candidate>& cands, auto&& distance) {
        const Candidate* best = nullptr;
        double best_score = 0;
        for (const auto& cand : cands) {
            const double score = cand.run.length() - kPeripheryLambda * distance(cand.position);
            if (!best || score > best_score) {
                best = &cand;
                best_score = score;
            }
        }
        return *best;
    };

    const Candidate x_cand =
        pick(rows, [&](int y) { return double(img.height() - 1 - y); });
    const Candidate y_cand = pick(cols, [](int x) { return double(x); });

    AxisLine x_axis{Orientation::Horizontal, x_cand.position, x_cand.run.start, x_cand.run.end};
    AxisLine y_axis{Orientation::Vertical, y_cand.position, y_cand.run.start, y_cand.run.end};
    return {x_axis, y_axis};
}

std::pair<std::optional<AxisLine>, std::optional<AxisLine>> detect_frames(
    const RasterImage& img, const std::pair<AxisLine, AxisLine>& axes)
{
    const auto& [x_axis, y_axis] = axes;
    const Run x_span{x_axis.span_start, x_axis.span_end};
    const Run y_span{y_axis.span_start, y_axis.span_end};

    std::optional<AxisLine> top;
    for (const auto& cand : row_candidates(img)) {
        if (cand.position >= x_axis.position - 2) {
            continue;
        }
        if (overlap(cand.run, x_span) < 0.8 * x_span.length()) {
            continue;
        }
        if (mean_saturation_row(img, cand.position, cand.run) > kGraySpan) {
            continue;
        }
        if (!top || cand.position < top->position) {
            top = AxisLine{Orientation::Horizontal, cand.position, cand.run.start, cand.run.end};
        }
    }

    std::optional<AxisLine> right;
    for (const auto& cand : column_candidates(img)) {
        if (cand.position <= y_axis.position + 2) {
            continue;
        }
        if (overlap(cand.run, y_span) < 0.8 * y_span.length()) {
            continue;
        }
        if (mean_saturation_col(img, cand.position, cand.run) > kGraySpan) {
            continue;
        }
        if (!right || cand.position > right->position) {
            right = AxisLine{Orientation::Vertical, cand.position, cand.run.start, cand.run.end};
        }
    }
    return {top, right};
}

std::vector<Tick> detect_ticks(const RasterImage& img, const std::pair<AxisLine, AxisLine>& axes)
{
    const auto& [x_axis, y_axis] = axes;
    const double scale = std::max(img.width(), img.height()) / 640.0;
    const int min_len = std::max(2, int(std::lround(2 * scale)));
    const int max_len = std::max(min_len, int(std::lround(12 * scale)));

    // Ticks sit on the outside of the plot: below the x-axis, left of the y-axis.
    auto below = [&](int col, int depth) {
        const int y = x_axis.position + depth;
        return y < img.height() && is_dark(img.at(col, y));
    };
    auto left_of = [&](int row, int depth) {
        const int x = y_axis.position - depth;
        return x >= 0 && is_dark(img.at(x, row));
    };

    const auto x_marks =
        tick_marks(x_axis.span_start, x_axis.span_end, min_len, max_len, below);
    const auto y_marks =
        tick_marks(y_axis.span_start, y_axis.span_end, min_len, max_len, left_of);

    std::vector<Tick> out;
    for (int c : largest_arithmetic_subset(x_marks, kProgressionTol)) {
        out.push_back(Tick{AxisKind::X, c});
    }
    for (int c : largest_arithmetic_subset(y_marks, kProgressionTol)) {
        out.push_back(Tick{AxisKind::Y, c});
    }
    return out;
}

std::vector<AxisLine> detect_grid(const RasterImage& img,
                                  const std::pair<AxisLine, AxisLine>& axes)
{
    const Regions regions = split_regions(img, axes);
    const BoundingBox& data = regions.data_region;

    std::vector<int> gray_rows;
    {
        std::vector<int> candidates;
        for (int y = data.y_min; y < data.y_max; ++y) {
            int count = 0;
            for (int x = data.x_min; x < data.x_max; ++x) {
                count += is_grayish(img.at(x, y)) ? 1 : 0;
            }
            if (count >= 0.8 * data.width()) {
                candidates.push_back(y);
            }
        }
        // Merge adjacent rows of one thick line into its center.
        for (std::size_t i = 0; i < candidates.size();) {
            std::size_t j = i;
            while (j + 1 < candidates.size() && candidates[j + 1] == candidates[j] + 1) {
                ++j;
            }
            gray_rows.push_back((candidates[i] + candidates[j]) / 2);
            i = j + 1;
        }
    }
    std::vector<int> gray_cols;
    {
        std::vector<int> candidates;
        for (int x = data.x_min; x < data.x_max; ++x) {
            int count = 0;
            for (int y = data.y_min; y < data.y_max; ++y) {
                count += is_grayish(img.at(x, y)) ? 1 : 0;
            }
            if (count >= 0.8 * data.height()) {
                candidates.push_back(x);
            }
        }
        for (std::size_t i = 0; i < candidates.size();) {
            std::size_t j = i;
            while (j + 1 < candidates.size() && candidates[j + 1] == candidates[j] + 1) {
                ++j;
            }
            gray_cols.push_back((candidates[i] + candidates[j]) / 2);
            i = j + 1;
        }
    }

    std::vector<AxisLine> out;
    for (int y : largest_arithmetic_subset(gray_rows, kProgressionTol)) {
        out.push_back(AxisLine{Orientation::Horizontal, y, data.x_min, data.x_max});
    }
    for (int x : largest_arithmetic_subset(gray_cols, kProgressionTol)) {
        out.push_back(AxisLine{Orientation::Vertical, x, data.y_min, data.y_max});
    }
    return out;
}

Regions split_regions(const RasterImage& img, const std::pair<AxisLine, AxisLine>& axes)
{
    const auto& [x_axis, y_axis] = axes;
    const auto [top_frame, right_frame] = detect_frames(img, axes);

    const int top = top_frame ? top_frame->position + 1 : 0;
    const int right = right_frame ? right_frame->position : img.width();

    Regions out;
    out.data_region =
        BoundingBox{y_axis.position + 1, top, right, x_axis.position};
    if (!out.data_region.valid()) {
        throw DegenerateRegion("axes leave no data region");
    }

    if (x_axis.position + 1 < img.height()) {
        out.x_label_region = BoundingBox{0, x_axis.position + 1, img.width(), img.height()};
    }
    const BoundingBox y_band{0, top, y_axis.position, x_axis.position};
    if (y_band.valid()) {
        out.y_label_region = y_band;
    }
    return out;
}

GraphLayout analyze_layout(const RasterImage& img)
{
    GraphLayout layout;
    const auto axes = detect_axes(img);
    layout.x_axis = axes.first;
    layout.y_axis = axes.second;

    const auto [top, right] = detect_frames(img, axes);
    layout.top_frame = top;
    layout.right_frame = right;

    const Regions regions = split_regions(img, axes);
    layout.data_region = regions.data_region;
    layout.x_label_region = regions.x_label_region;
    layout.y_label_region = regions.y_label_region;

    layout.ticks = detect_ticks(img, axes);
    layout.grid_lines = detect_grid(img, axes);
    return layout;
}

}  // namespace plotdig
