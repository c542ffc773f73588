#include "plotdig/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string_view>

#include <json.hpp>

#include "plotdig/errors.hpp"
#include "plotdig/image_io.hpp"
#include "plotdig/match.hpp"

namespace plotdig {

namespace {

using ojson = nlohmann::ordered_json;

constexpr int kMarginLeft = 72;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 24;
constexpr int kMarginBottom = 56;
constexpr int kTickLen = 5;
constexpr Color kGridGray{228, 228, 228};

constexpr std::string_view kGlyphOrder = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ.-+";

// 5x7 bitmaps, one byte per row, bit 4 = leftmost column.
constexpr std::uint8_t kGlyphs[39][7] = {
    {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},  // 0
    {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},  // 1
    {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},  // 2
    {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},  // 3
    {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},  // 4
    {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},  // 5
    {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},  // 6
    {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},  // 7
    {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},  // 8
    {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},  // 9
    {0x0E, 0x11, 0x11, 0x11, 0x1F, 0x11, 0x11},  // A
    {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E},  // B
    {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E},  // C
    {0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C},  // D
    {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F},  // E
    {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10},  // F
    {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F},  // G
    {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11},  // H
    {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E},  // I
    {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C},  // J
    {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11},  // K
    {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F},  // L
    {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11},  // M
    {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11},  // N
    {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E},  // O
    {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10},  // P
    {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D},  // Q
    {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11},  // R
    {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E},  // S
    {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04},  // T
    {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E},  // U
    {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04},  // V
    {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A},  // W
    {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11},  // X
    {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04},  // Y
    {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F},  // Z
    {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C},  // .
    {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00},  // -
    {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00},  // +
};

constexpr std::string_view kSeriesWords[] = {"ALPHA", "BETA",  "GAMMA", "DELTA", "KAPPA",
                                             "SIGMA", "OMEGA", "THETA", "ZETA",  "LAMBDA"};
constexpr std::string_view kXTitles[] = {"CYCLE", "TIME", "PRESSURE", "DOSE"};
constexpr std::string_view kYTitles[] = {"CAPACITY", "UPTAKE", "INTENSITY", "SIGNAL"};
constexpr double kNiceSteps[] = {0.1, 0.2, 0.25, 0.5, 1, 2, 5, 10, 20, 25, 50, 100};

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Bounded draw with the raw engine stream, so the byte sequence does not
// depend on the standard library's distribution internals.
int rand_int(std::mt19937_64& rng, int lo, int hi)
{
    return lo + int(rng() % std::uint64_t(hi - lo + 1));
}

int glyph_index(char c)
{
    const std::size_t pos = kGlyphOrder.find(c);
    return pos == std::string_view::npos ? -1 : int(pos);
}

int text_width(std::string_view text, int scale)
{
    return text.empty() ? 0 : (int(text.size()) * 6 - 1) * scale;
}

void draw_text(RasterImage& img, int x, int y, std::string_view text, int scale, Color color)
{
    for (std::size_t i = 0; i < text.size(); ++i) {
        const int gi = glyph_index(text[i]);
        if (gi < 0) {
            continue;  // unknown characters render as spaces
        }
        const int base_x = x + int(i) * 6 * scale;
        for (int row = 0; row < 7; ++row) {
            for (int col = 0; col < 5; ++col) {
                if ((kGlyphs[gi][row] >> (4 - col)) & 1) {
                    for (int dy = 0; dy < scale; ++dy) {
                        for (int dx = 0; dx < scale; ++dx) {
                            const int px = base_x + col * scale + dx;
                            const int py = y + row * scale + dy;
                            if (px >= 0 && py >= 0 && px < img.width() && py < img.height()) {
                                img.set(px, py, color);
                            }
                        }
                    }
                }
            }
        }
    }
}

void fill_rect(RasterImage& img, const BoundingBox& box, Color color)
{
    const BoundingBox clipped = intersect(box, {0, 0, img.width(), img.height()});
    for (int y = clipped.y_min; y < clipped.y_max; ++y) {
        for (int x = clipped.x_min; x < clipped.x_max; ++x) {
            img.set(x, y, color);
        }
    }
}

int needed_decimals(double v)
{
    if (std::abs(v - std::round(v)) < 1e-9) {
        return 0;
    }
    if (std::abs(10 * v - std::round(10 * v)) < 1e-7) {
        return 1;
    }
    return 2;
}

std::string format_value(double v, int decimals)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

struct Geometry {
    int yc = 0;       // y axis column
    int xr = 0;       // x axis row
    int plot_x0 = 0;  // data columns [plot_x0, plot_x1)
    int plot_x1 = 0;
    int plot_y0 = 0;  // data rows [plot_y0, xr)
    std::vector<int> x_ticks;  // columns, ascending
    std::vector<int> y_ticks;  // rows, bottom (largest) first
};

Geometry make_geometry(const ChartSpec& spec)
{
    Geometry g;
    g.yc = kMarginLeft - 1;
    g.xr = spec.height - kMarginBottom;
    g.plot_x0 = kMarginLeft;
    g.plot_x1 = spec.width - kMarginRight;
    g.plot_y0 = kMarginTop;
    const int sx = (g.plot_x1 - g.plot_x0 - 1) / (spec.x_tick_count - 1);
    const int sy = (g.xr - g.plot_y0 - 1) / (spec.y_tick_count - 1);
    for (int k = 0; k < spec.x_tick_count; ++k) {
        g.x_ticks.push_back(g.plot_x0 + k * sx);
    }
    for (int k = 0; k < spec.y_tick_count; ++k) {
        g.y_ticks.push_back((g.xr - 1) - k * sy);
    }
    return g;
}

void validate_spec(const ChartSpec& spec)
{
    auto fail = [](const char* why) { throw InvalidSpec(why); };
    if (spec.width < 320 || spec.height < 240) {
        fail("chart smaller than 320x240");
    }
    if (spec.line_count < 1 || spec.line_count > 5) {
        fail("line_count outside [1, 5]");
    }
    if (int(spec.palette.size()) != spec.line_count) {
        fail("palette size must equal line_count");
    }
    if (spec.x_tick_count < 3 || spec.x_tick_count > 8 || spec.y_tick_count < 3
        || spec.y_tick_count > 8) {
        fail("tick counts outside [3, 8]");
    }
    if (!(spec.x_max > spec.x_min) || !(spec.y_max > spec.y_min)) {
        fail("axis ranges must be increasing");
    }
    for (double v : {spec.x_min, spec.x_max, spec.y_min, spec.y_max}) {
        if (std::abs(100 * v - std::round(100 * v)) > 1e-6) {
            fail("axis bounds must be multiples of 0.01");
        }
    }
}

DetectedObject text_object(const BoundingBox& box, std::string text)
{
    DetectedObject obj;
    obj.category = ObjectCategory::Text;
    obj.box = box;
    obj.text = std::move(text);
    return obj;
}

// Tick labels for extreme hand-written ranges could spill off the canvas and
// produce annotations no reader would accept; refuse such specs up front.
void require_inside(const BoundingBox& box, const ChartSpec& spec)
{
    if (box.x_min < 0 || box.y_min < 0 || box.x_max > spec.width || box.y_max > spec.height) {
        throw InvalidSpec("axis label does not fit on the canvas");
    }
}

// --- JSON helpers -----------------------------------------------------------

ojson to_json(const BoundingBox& b)
{
    return ojson::array({b.x_min, b.y_min, b.x_max, b.y_max});
}

ojson to_json(Color c)
{
    return ojson::array({c.r, c.g, c.b});
}

ojson to_json(const AxisLine& line)
{
    ojson j;
    j["orientation"] = line.orientation == Orientation::Horizontal ? "horizontal" : "vertical";
    j["position"] = line.position;
    j["span"] = ojson::array({line.span_start, line.span_end});
    return j;
}

ojson objects_to_json(const std::vector<DetectedObject>& objects)
{
    ojson arr = ojson::array();
    for (const auto& obj : objects) {
        ojson rec;
        rec["category"] = std::string(category_name(obj.category));
        rec["box"] = to_json(obj.box);
        rec["confidence"] = obj.confidence;
        if (obj.text) {
            rec["text"] = *obj.text;
        }
        arr.push_back(std::move(rec));
    }
    return arr;
}

ojson points_to_json(const std::vector<PointXY>& points)
{
    ojson arr = ojson::array();
    for (const PointXY& p : points) {
        arr.push_back(ojson::array({p.x, p.y}));
    }
    return arr;
}

ojson scale_to_json(const AxisScale& scale)
{
    ojson j;
    j["kind"] = scale.kind == ScaleKind::Linear ? "linear" : "normalized";
    j["slope"] = scale.slope;
    j["intercept"] = scale.intercept;
    j["span"] = ojson::array({scale.span_start, scale.span_end});
    if (scale.label) {
        j["label"] = *scale.label;
    }
    return j;
}

BoundingBox box_from_json(const ojson& j)
{
    return BoundingBox{j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>(),
                       j.at(3).get<int>()};
}

Color color_from_json(const ojson& j)
{
    return Color{j.at(0).get<std::uint8_t>(), j.at(1).get<std::uint8_t>(),
                 j.at(2).get<std::uint8_t>()};
}

AxisLine axis_line_from_json(const ojson& j)
{
    AxisLine line;
    line.orientation = j.at("orientation").get<std::string>() == "horizontal"
        ? Orientation::Horizontal
        : Orientation::Vertical;
    line.position = j.at("position").get<int>();
    line.span_start = j.at("span").at(0).get<int>();
    line.span_end = j.at("span").at(1).get<int>();
    return line;
}

std::vector<DetectedObject> objects_from_json(const ojson& arr)
{
    std::vector<DetectedObject> out;
    for (const auto& rec : arr) {
        DetectedObject obj;
        obj.category = category_from_name(rec.at("category").get<std::string>());
        obj.box = box_from_json(rec.at("box"));
        obj.confidence = rec.at("confidence").get<double>();
        if (rec.contains("text")) {
            obj.text = rec.at("text").get<std::string>();
        }
        out.push_back(std::move(obj));
    }
    return out;
}

std::vector<PointXY> points_from_json(const ojson& arr)
{
    std::vector<PointXY> out;
    for (const auto& p : arr) {
        out.push_back(PointXY{p.at(0).get<double>(), p.at(1).get<double>()});
    }
    return out;
}

AxisScale scale_from_json(const ojson& j)
{
    AxisScale scale;
    scale.kind =
        j.at("kind").get<std::string>() == "linear" ? ScaleKind::Linear : ScaleKind::Normalized;
    scale.slope = j.at("slope").get<double>();
    scale.intercept = j.at("intercept").get<double>();
    scale.span_start = j.at("span").at(0).get<double>();
    scale.span_end = j.at("span").at(1).get<double>();
    if (j.contains("label")) {
        scale.label = j.at("label").get<std::string>();
    }
    return scale;
}

}  // namespace

Color halo_color(Color c)
{
    auto blend = [](std::uint8_t ch) { return std::uint8_t(ch + (255 - ch + 8) / 16); };
    return Color{blend(c.r), blend(c.g), blend(c.b)};
}

ChartSpec random_chart_spec(std::uint64_t seed, const SynthOptions& options)
{
    std::mt19937_64 rng(splitmix64(seed));
    ChartSpec spec;
    spec.seed = seed;
    spec.line_count = rand_int(rng, 2, 5);
    spec.x_tick_count = rand_int(rng, 4, 6);
    spec.y_tick_count = rand_int(rng, 4, 6);
    spec.grid = rand_int(rng, 0, 1) == 1;
    spec.frame = rand_int(rng, 0, 1) == 1;
    spec.legend = true;
    spec.noise = options.noise;

    const double x_step = kNiceSteps[rand_int(rng, 0, 11)];
    spec.x_min = x_step * rand_int(rng, -1, 4);
    spec.x_max = spec.x_min + x_step * (spec.x_tick_count - 1);
    const double y_step = kNiceSteps[rand_int(rng, 0, 11)];
    spec.y_min = y_step * rand_int(rng, -1, 4);
    spec.y_max = spec.y_min + y_step * (spec.y_tick_count - 1);

    // Rejection-sample a palette that stays clearly apart from the grays the
    // cleanup stage sweeps, from the whitening threshold, and (in noise mode)
    // from every other line's halo shell.
    for (int attempts = 0; int(spec.palette.size()) < spec.line_count; ++attempts) {
        if (attempts > 20000) {
            throw InvalidSpec("palette constraints unsatisfiable");
        }
        const Color c{std::uint8_t(rand_int(rng, 0, 255)), std::uint8_t(rand_int(rng, 0, 255)),
                      std::uint8_t(rand_int(rng, 0, 255))};
        const double from_white = color_distance(c, kWhite);
        if (from_white < 140.0 || from_white > 360.0 || saturation_span(c) < 48) {
            continue;
        }
        bool ok = true;
        for (const Color& prior : spec.palette) {
            if (color_distance(c, prior) < options.min_color_distance
                || cosine_similarity(to_vector(c), to_vector(prior)) > 0.98) {
                ok = false;
                break;
            }
            if (options.noise
                && (color_distance(halo_color(c), prior) <= 27.0
                    || color_distance(c, halo_color(prior)) <= 27.0
                    || color_distance(halo_color(c), halo_color(prior)) <= 27.0)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            spec.palette.push_back(c);
        }
    }
    return spec;
}

std::pair<RasterImage, GroundTruth> generate_chart(const ChartSpec& spec)
{
    validate_spec(spec);
    const Geometry g = make_geometry(spec);
    RasterImage img(spec.width, spec.height, kWhite);
    GroundTruth truth;
    std::mt19937_64 rng(splitmix64(spec.seed ^ 0xC0FFEEULL));

    const std::string x_title(kXTitles[rand_int(rng, 0, 3)]);
    const std::string y_title(kYTitles[rand_int(rng, 0, 3)]);

    std::array<int, 10> word_order{};
    for (int i = 0; i < 10; ++i) {
        word_order[std::size_t(i)] = i;
    }
    for (int i = 9; i > 0; --i) {
        std::swap(word_order[std::size_t(i)], word_order[std::size_t(rand_int(rng, 0, i))]);
    }

    // Grid under everything, then axes, frame, and ticks.
    if (spec.grid) {
        for (int col : g.x_ticks) {
            fill_rect(img, {col, g.plot_y0, col + 1, g.xr}, kGridGray);
        }
        for (int row : g.y_ticks) {
            fill_rect(img, {g.plot_x0, row, g.plot_x1, row + 1}, kGridGray);
        }
    }
    fill_rect(img, {g.yc, g.xr, g.plot_x1, g.xr + 1}, kBlack);       // x axis
    fill_rect(img, {g.yc, g.plot_y0, g.yc + 1, g.xr + 1}, kBlack);   // y axis
    if (spec.frame) {
        fill_rect(img, {g.plot_x0, g.plot_y0 - 1, g.plot_x1, g.plot_y0}, kBlack);
        fill_rect(img, {g.plot_x1, g.plot_y0, g.plot_x1 + 1, g.xr}, kBlack);
    }
    for (int col : g.x_ticks) {
        fill_rect(img, {col, g.xr + 1, col + 1, g.xr + 1 + kTickLen}, kBlack);
    }
    for (int row : g.y_ticks) {
        fill_rect(img, {g.yc - kTickLen, row, g.yc, row + 1}, kBlack);
    }

    // Numeric tick labels, centered on their tick so the box center is the
    // exact anchor, plus the two axis titles.
    std::vector<DetectedObject> texts;
    const double x_value_step = (spec.x_max - spec.x_min) / (spec.x_tick_count - 1);
    const double y_value_step = (spec.y_max - spec.y_min) / (spec.y_tick_count - 1);
    const int x_decimals = std::max(needed_decimals(spec.x_min), needed_decimals(x_value_step));
    const int y_decimals = std::max(needed_decimals(spec.y_min), needed_decimals(y_value_step));
    for (int k = 0; k < spec.x_tick_count; ++k) {
        const std::string label = format_value(spec.x_min + k * x_value_step, x_decimals);
        const int w = text_width(label, 2);
        const BoundingBox box{g.x_ticks[std::size_t(k)] - w / 2, g.xr + 9,
                              g.x_ticks[std::size_t(k)] - w / 2 + w, g.xr + 23};
        require_inside(box, spec);
        draw_text(img, box.x_min, box.y_min, label, 2, kBlack);
        texts.push_back(text_object(box, label));
    }
    for (int k = 0; k < spec.y_tick_count; ++k) {
        const std::string label = format_value(spec.y_min + k * y_value_step, y_decimals);
        const int w = text_width(label, 2);
        const int row = g.y_ticks[std::size_t(k)];
        const BoundingBox box{g.yc - 8 - w, row - 7, g.yc - 8, row + 7};
        require_inside(box, spec);
        draw_text(img, box.x_min, box.y_min, label, 2, kBlack);
        texts.push_back(text_object(box, label));
    }
    {
        const int w = text_width(x_title, 2);
        const int cx = (g.plot_x0 + g.plot_x1) / 2;
        const BoundingBox box{cx - w / 2, g.xr + 28, cx - w / 2 + w, g.xr + 42};
        draw_text(img, box.x_min, box.y_min, x_title, 2, kBlack);
        texts.push_back(text_object(box, x_title));
    }
    {
        const int w = text_width(y_title, 1);
        const BoundingBox box{2, g.plot_y0 + 16, 2 + w, g.plot_y0 + 23};
        draw_text(img, box.x_min, box.y_min, y_title, 1, kBlack);
        texts.push_back(text_object(box, y_title));
    }

    // Truth scales: value step per pixel step, anchored on the first tick.
    truth.x_scale.kind = ScaleKind::Linear;
    truth.x_scale.slope = x_value_step / (g.x_ticks[1] - g.x_ticks[0]);
    truth.x_scale.intercept = spec.x_min - truth.x_scale.slope * g.x_ticks[0];
    truth.x_scale.span_start = g.yc;
    truth.x_scale.span_end = g.plot_x1;
    truth.x_scale.label = x_title;
    truth.y_scale.kind = ScaleKind::Linear;
    truth.y_scale.slope = -y_value_step / (g.y_ticks[0] - g.y_ticks[1]);
    truth.y_scale.intercept = spec.y_min - truth.y_scale.slope * g.y_ticks[0];
    truth.y_scale.span_start = g.plot_y0;
    truth.y_scale.span_end = g.xr + 1;
    truth.y_scale.label = y_title;

    // Column-stepped polylines, two pixels thick, so every drawn column's
    // center sits exactly half a pixel below the rounded row.
    std::vector<std::vector<std::pair<int, int>>> line_pixels(std::size_t(spec.line_count));
    for (int i = 0; i < spec.line_count; ++i) {
        const int breakpoints = rand_int(rng, 3, 6);
        std::vector<int> cols(static_cast<std::size_t>(breakpoints));
        cols.front() = g.x_ticks.front();
        cols.back() = g.x_ticks.back();
        const int seg = (cols.back() - cols.front()) / (breakpoints - 1);
        for (int k = 1; k + 1 < breakpoints; ++k) {
            const int jitter = rand_int(rng, -seg / 3, seg / 3);
            cols[std::size_t(k)] =
                std::max(cols[std::size_t(k - 1)] + 4, cols.front() + k * seg + jitter);
        }
        std::vector<int> rows(static_cast<std::size_t>(breakpoints));
        for (int& row : rows) {
            row = rand_int(rng, g.plot_y0 + 6, g.xr - 8);
        }

        TruthSeries series;
        series.label = std::string(kSeriesWords[std::size_t(word_order[std::size_t(i)])]);
        series.color = spec.palette[std::size_t(i)];
        for (int k = 0; k < breakpoints; ++k) {
            series.pixel_points.push_back(
                PointXY{double(cols[std::size_t(k)]), rows[std::size_t(k)] + 0.5});
            series.value_points.push_back(
                PointXY{truth.x_scale.apply(double(cols[std::size_t(k)])),
                        truth.y_scale.apply(rows[std::size_t(k)] + 0.5)});
        }
        truth.series.push_back(std::move(series));

        auto& pixels = line_pixels[std::size_t(i)];
        for (int k = 0; k + 1 < breakpoints; ++k) {
            const int c0 = cols[std::size_t(k)], c1 = cols[std::size_t(k + 1)];
            const int r0 = rows[std::size_t(k)], r1 = rows[std::size_t(k + 1)];
            for (int col = c0; col < c1; ++col) {
                const double ideal = r0 + double(col - c0) * (r1 - r0) / double(c1 - c0);
                const int row = int(std::floor(ideal + 0.5));
                pixels.emplace_back(col, row);
                pixels.emplace_back(col, row + 1);
            }
        }
        pixels.emplace_back(cols.back(), rows.back());
        pixels.emplace_back(cols.back(), rows.back() + 1);
        for (const auto& [x, y] : pixels) {
            img.set(x, y, spec.palette[std::size_t(i)]);
        }
    }

    if (spec.noise) {
        // One fixed halo color per line on adjacent background pixels; close
        // enough to its line to read as the same cluster, constrained by the
        // palette sampler to stay off everyone else's colors.
        constexpr int kOffsets[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (int i = 0; i < spec.line_count; ++i) {
            const Color halo = halo_color(spec.palette[std::size_t(i)]);
            for (const auto& [x, y] : line_pixels[std::size_t(i)]) {
                for (const auto& off : kOffsets) {
                    const int nx = x + off[0], ny = y + off[1];
                    if (nx < 0 || ny < 0 || nx >= spec.width || ny >= spec.height) {
                        continue;
                    }
                    const Color cur = img.at(nx, ny);
                    if (cur == kWhite || cur == kGridGray) {
                        img.set(nx, ny, halo);
                    }
                }
            }
        }
    }

    std::vector<DetectedObject> markers;
    std::vector<DetectedObject> legend_texts;
    if (spec.legend) {
        int max_lw = 0;
        for (const TruthSeries& s : truth.series) {
            max_lw = std::max(max_lw, text_width(s.label, 2));
        }
        const int block_w = 24 + 6 + max_lw;
        const int block_x0 = g.plot_x1 - 10 - block_w;
        const int block_y0 = g.plot_y0 + 10;
        fill_rect(img,
                  {block_x0 - 4, block_y0 - 4, g.plot_x1 - 6,
                   block_y0 + spec.line_count * 18 + 4},
                  kWhite);
        for (int i = 0; i < spec.line_count; ++i) {
            const int ey = block_y0 + i * 18;
            const BoundingBox swatch{block_x0, ey + 4, block_x0 + 24, ey + 10};
            fill_rect(img, swatch, spec.palette[std::size_t(i)]);
            DetectedObject marker;
            marker.category = ObjectCategory::Marker;
            marker.box = swatch;
            markers.push_back(marker);

            const std::string& label = truth.series[std::size_t(i)].label;
            const BoundingBox text_box{block_x0 + 30, ey, block_x0 + 30 + text_width(label, 2),
                                       ey + 14};
            draw_text(img, text_box.x_min, text_box.y_min, label, 2, kBlack);
            DetectedObject legend;
            legend.category = ObjectCategory::Legend;
            legend.box = text_box;
            legend.text = label;
            legend_texts.push_back(std::move(legend));
        }
    }

    DetectedObject graph;
    graph.category = ObjectCategory::Graph;
    graph.box = BoundingBox{0, 0, spec.width, spec.height};
    truth.annotations.push_back(graph);
    for (auto& t : texts) {
        truth.annotations.push_back(std::move(t));
    }
    for (auto& m : markers) {
        truth.annotations.push_back(std::move(m));
    }
    for (auto& l : legend_texts) {
        truth.annotations.push_back(std::move(l));
    }

    truth.layout.x_axis = AxisLine{Orientation::Horizontal, g.xr, g.yc, g.plot_x1};
    truth.layout.y_axis = AxisLine{Orientation::Vertical, g.yc, g.plot_y0, g.xr + 1};
    if (spec.frame) {
        truth.layout.top_frame = AxisLine{Orientation::Horizontal, g.plot_y0 - 1, g.plot_x0,
                                          g.plot_x1};
        truth.layout.right_frame = AxisLine{Orientation::Vertical, g.plot_x1, g.plot_y0, g.xr};
        truth.layout.data_region = BoundingBox{g.plot_x0, g.plot_y0, g.plot_x1, g.xr};
    } else {
        truth.layout.data_region = BoundingBox{g.plot_x0, 0, spec.width, g.xr};
    }
    truth.layout.x_label_region = BoundingBox{0, g.xr + 1, spec.width, spec.height};
    truth.layout.y_label_region =
        BoundingBox{0, truth.layout.data_region.y_min, g.yc, g.xr};
    for (int col : g.x_ticks) {
        truth.layout.ticks.push_back(Tick{AxisKind::X, col});
    }
    for (auto it = g.y_ticks.rbegin(); it != g.y_ticks.rend(); ++it) {
        truth.layout.ticks.push_back(Tick{AxisKind::Y, *it});
    }
    if (spec.grid) {
        for (int col : g.x_ticks) {
            truth.layout.grid_lines.push_back(
                AxisLine{Orientation::Vertical, col, g.plot_y0, g.xr});
        }
        for (auto it = g.y_ticks.rbegin(); it != g.y_ticks.rend(); ++it) {
            truth.layout.grid_lines.push_back(
                AxisLine{Orientation::Horizontal, *it, g.plot_x0, g.plot_x1});
        }
    }

    return {std::move(img), std::move(truth)};
}

std::string annotations_json(int width, int height, const std::vector<DetectedObject>& objects)
{
    ojson doc;
    doc["image"] = ojson{{"width", width}, {"height", height}};
    doc["objects"] = objects_to_json(objects);
    return doc.dump() + "\n";
}

std::string truth_json(const ChartSpec& spec, const GroundTruth& truth)
{
    ojson doc;
    ojson& s = doc["spec"];
    s["seed"] = spec.seed;
    s["width"] = spec.width;
    s["height"] = spec.height;
    s["line_count"] = spec.line_count;
    s["palette"] = ojson::array();
    for (Color c : spec.palette) {
        s["palette"].push_back(to_json(c));
    }
    s["x_range"] = ojson::array({spec.x_min, spec.x_max});
    s["y_range"] = ojson::array({spec.y_min, spec.y_max});
    s["x_tick_count"] = spec.x_tick_count;
    s["y_tick_count"] = spec.y_tick_count;
    s["legend"] = spec.legend;
    s["grid"] = spec.grid;
    s["frame"] = spec.frame;
    s["noise"] = spec.noise;

    ojson& l = doc["layout"];
    l["x_axis"] = to_json(truth.layout.x_axis);
    l["y_axis"] = to_json(truth.layout.y_axis);
    l["top_frame"] = truth.layout.top_frame ? to_json(*truth.layout.top_frame) : ojson(nullptr);
    l["right_frame"] =
        truth.layout.right_frame ? to_json(*truth.layout.right_frame) : ojson(nullptr);
    l["data_region"] = to_json(truth.layout.data_region);
    l["x_label_region"] =
        truth.layout.x_label_region ? to_json(*truth.layout.x_label_region) : ojson(nullptr);
    l["y_label_region"] =
        truth.layout.y_label_region ? to_json(*truth.layout.y_label_region) : ojson(nullptr);
    ojson x_ticks = ojson::array(), y_ticks = ojson::array();
    for (const Tick& t : truth.layout.ticks) {
        (t.axis == AxisKind::X ? x_ticks : y_ticks).push_back(t.coordinate);
    }
    l["x_ticks"] = std::move(x_ticks);
    l["y_ticks"] = std::move(y_ticks);
    l["grid_lines"] = ojson::array();
    for (const AxisLine& line : truth.layout.grid_lines) {
        l["grid_lines"].push_back(to_json(line));
    }

    doc["annotations"] = objects_to_json(truth.annotations);

    doc["series"] = ojson::array();
    for (const TruthSeries& s2 : truth.series) {
        ojson rec;
        rec["label"] = s2.label;
        rec["color"] = to_json(s2.color);
        rec["pixel_points"] = points_to_json(s2.pixel_points);
        rec["value_points"] = points_to_json(s2.value_points);
        doc["series"].push_back(std::move(rec));
    }
    doc["x_scale"] = scale_to_json(truth.x_scale);
    doc["y_scale"] = scale_to_json(truth.y_scale);
    return doc.dump() + "\n";
}

std::pair<ChartSpec, GroundTruth> parse_truth_json(const std::string& text)
{
    const ojson doc = ojson::parse(text);
    ChartSpec spec;
    const ojson& s = doc.at("spec");
    spec.seed = s.at("seed").get<std::uint64_t>();
    spec.width = s.at("width").get<int>();
    spec.height = s.at("height").get<int>();
    spec.line_count = s.at("line_count").get<int>();
    for (const auto& c : s.at("palette")) {
        spec.palette.push_back(color_from_json(c));
    }
    spec.x_min = s.at("x_range").at(0).get<double>();
    spec.x_max = s.at("x_range").at(1).get<double>();
    spec.y_min = s.at("y_range").at(0).get<double>();
    spec.y_max = s.at("y_range").at(1).get<double>();
    spec.x_tick_count = s.at("x_tick_count").get<int>();
    spec.y_tick_count = s.at("y_tick_count").get<int>();
    spec.legend = s.at("legend").get<bool>();
    spec.grid = s.at("grid").get<bool>();
    spec.frame = s.at("frame").get<bool>();
    spec.noise = s.at("noise").get<bool>();

    GroundTruth truth;
    const ojson& l = doc.at("layout");
    truth.layout.x_axis = axis_line_from_json(l.at("x_axis"));
    truth.layout.y_axis = axis_line_from_json(l.at("y_axis"));
    if (!l.at("top_frame").is_null()) {
        truth.layout.top_frame = axis_line_from_json(l.at("top_frame"));
    }
    if (!l.at("right_frame").is_null()) {
        truth.layout.right_frame = axis_line_from_json(l.at("right_frame"));
    }
    truth.layout.data_region = box_from_json(l.at("data_region"));
    if (!l.at("x_label_region").is_null()) {
        truth.layout.x_label_region = box_from_json(l.at("x_label_region"));
    }
    if (!l.at("y_label_region").is_null()) {
        truth.layout.y_label_region = box_from_json(l.at("y_label_region"));
    }
    for (const auto& c : l.at("x_ticks")) {
        truth.layout.ticks.push_back(Tick{AxisKind::X, c.get<int>()});
    }
    for (const auto& c : l.at("y_ticks")) {
        truth.layout.ticks.push_back(Tick{AxisKind::Y, c.get<int>()});
    }
    for (const auto& line : l.at("grid_lines")) {
        truth.layout.grid_lines.push_back(axis_line_from_json(line));
    }

    truth.annotations = objects_from_json(doc.at("annotations"));

    for (const auto& rec : doc.at("series")) {
        TruthSeries series;
        series.label = rec.at("label").get<std::string>();
        series.color = color_from_json(rec.at("color"));
        series.pixel_points = points_from_json(rec.at("pixel_points"));
        series.value_points = points_from_json(rec.at("value_points"));
        truth.series.push_back(std::move(series));
    }
    truth.x_scale = scale_from_json(doc.at("x_scale"));
    truth.y_scale = scale_from_json(doc.at("y_scale"));
    return {std::move(spec), std::move(truth)};
}

void write_corpus(const std::filesystem::path& out_dir, int count, std::uint64_t seed,
                  const SynthOptions& options)
{
    std::filesystem::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
        const ChartSpec spec = random_chart_spec(splitmix64(seed + std::uint64_t(i)), options);
        auto [img, truth] = generate_chart(spec);

        char name[32];
        std::snprintf(name, sizeof name, "chart_%04d", i);
        dump_png(img, out_dir / (std::string(name) + ".png"));

        std::ofstream ann(out_dir / (std::string(name) + ".ann.json"), std::ios::binary);
        ann << annotations_json(spec.width, spec.height, truth.annotations);
        std::ofstream tr(out_dir / (std::string(name) + ".truth.json"), std::ios::binary);
        tr << truth_json(spec, truth);
    }
}

}  // namespace plotdig
