#include "plotdig/scale.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>

#include "plotdig/errors.hpp"

namespace plotdig {

double AxisScale::apply(double pixel) const
{
    const double value = slope * pixel + intercept;
    if (kind == ScaleKind::Normalized) {
        return std::clamp(value, 0.0, 1.0);
    }
    return value;
}

namespace {

bool is_strict_number(std::string_view s)
{
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        ++i;
    }
    int mantissa_digits = 0;
    bool seen_dot = false;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (c >= '0' && c <= '9') {
            ++mantissa_digits;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (mantissa_digits == 0) {
        return false;
    }
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            ++i;
        }
        int exponent_digits = 0;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            ++exponent_digits;
            ++i;
        }
        if (exponent_digits == 0) {
            return false;
        }
    }
    return i == s.size();
}

std::vector<NumericLabel> sorted_by_anchor(const std::vector<NumericLabel>& labels)
{
    std::vector<NumericLabel> sorted = labels;
    std::sort(sorted.begin(), sorted.end(),
              [](const NumericLabel& a, const NumericLabel& b) { return a.anchor < b.anchor; });
    return sorted;
}

// Every consecutive step within `tolerance` relative deviation of the mean
// step; false when the mean step is zero.
bool steps_are_uniform(const std::vector<double>& steps, double tolerance)
{
    double mean = 0.0;
    for (double s : steps) {
        mean += s;
    }
    mean /= double(steps.size());
    if (mean == 0.0) {
        return false;
    }
    for (double s : steps) {
        if (std::abs(s - mean) > tolerance * std::abs(mean)) {
            return false;
        }
    }
    return true;
}

}  // namespace

double parse_numeric(std::string_view text)
{
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
        ++begin;
    }
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
        --end;
    }
    std::string cleaned;
    cleaned.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        if (text[i] != ',') {
            cleaned.push_back(text[i]);
        }
    }
    if (!is_strict_number(cleaned)) {
        throw NonNumeric("not a number: \"" + std::string(text) + "\"");
    }
    const double value = std::strtod(cleaned.c_str(), nullptr);
    if (!std::isfinite(value)) {
        throw NonNumeric("out of range: \"" + std::string(text) + "\"");
    }
    return value;
}

bool validate_arithmetic(const std::vector<NumericLabel>& labels, double tolerance)
{
    if (labels.size() < 3) {
        throw TooFewLabels("arithmetic validation needs >= 3 labels, got " +
                           std::to_string(labels.size()));
    }
    const auto sorted = sorted_by_anchor(labels);
    std::vector<double> value_steps, anchor_steps;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        value_steps.push_back(sorted[i].value - sorted[i - 1].value);
        anchor_steps.push_back(sorted[i].anchor - sorted[i - 1].anchor);
    }
    return steps_are_uniform(value_steps, tolerance) &&
           steps_are_uniform(anchor_steps, tolerance);
}

bool looks_geometric(const std::vector<NumericLabel>& labels, double tolerance)
{
    if (labels.size() < 3) {
        return false;
    }
    const auto sorted = sorted_by_anchor(labels);
    std::vector<double> ratios;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const double prev = sorted[i - 1].value;
        const double cur = sorted[i].value;
        if (prev == 0.0 || cur == 0.0 || (prev < 0.0) != (cur < 0.0)) {
            return false;
        }
        ratios.push_back(cur / prev);
    }
    double mean = 0.0;
    for (double r : ratios) {
        mean += r;
    }
    mean /= double(ratios.size());
    if (std::abs(mean - 1.0) <= tolerance) {
        return false;  // near-constant values, not a log ladder
    }
    for (double r : ratios) {
        if (std::abs(r - mean) > tolerance * std::abs(mean)) {
            return false;
        }
    }
    return true;
}

AxisScale fit_axis_scale(const std::vector<NumericLabel>& labels, const AxisLine& axis,
                         double tolerance)
{
    if (!validate_arithmetic(labels, tolerance)) {
        throw ValidationFailed("axis labels fail the arithmetic-sequence check");
    }
    const auto sorted = sorted_by_anchor(labels);
    const double n = double(sorted.size());
    double mean_a = 0.0, mean_v = 0.0;
    for (const NumericLabel& l : sorted) {
        mean_a += l.anchor;
        mean_v += l.value;
    }
    mean_a /= n;
    mean_v /= n;
    double var = 0.0, cov = 0.0;
    for (const NumericLabel& l : sorted) {
        var += (l.anchor - mean_a) * (l.anchor - mean_a);
        cov += (l.anchor - mean_a) * (l.value - mean_v);
    }
    if (var == 0.0) {
        throw DegenerateFit("all label anchors coincide");
    }
    AxisScale scale;
    scale.kind = ScaleKind::Linear;
    scale.slope = cov / var;
    scale.intercept = mean_v - scale.slope * mean_a;
    scale.span_start = double(axis.span_start);
    scale.span_end = double(axis.span_end);
    return scale;
}

AxisScale make_normalized_scale(const AxisLine& axis)
{
    if (axis.span_end <= axis.span_start) {
        throw DegenerateFit("axis span is empty");
    }
    AxisScale scale;
    scale.kind = ScaleKind::Normalized;
    scale.slope = 1.0 / double(axis.span_end - axis.span_start);
    scale.intercept = -double(axis.span_start) * scale.slope;
    scale.span_start = double(axis.span_start);
    scale.span_end = double(axis.span_end);
    return scale;
}

std::vector<PointXY> rescale_series(const std::vector<PointXY>& series, const AxisScale& x_scale,
                                    const AxisScale& y_scale)
{
    std::vector<PointXY> out;
    out.reserve(series.size());
    for (const PointXY& p : series) {
        out.push_back(PointXY{x_scale.apply(p.x), y_scale.apply(p.y)});
    }
    return out;
}

}  // namespace plotdig
