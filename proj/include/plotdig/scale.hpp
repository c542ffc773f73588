#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plotdig/geometry.hpp"
#include "plotdig/layout.hpp"

namespace plotdig {

// One recognized axis number and where it sits along the axis (center of its
// box projected onto the axis direction).
struct NumericLabel {
    std::string raw_text;
    double value = 0.0;
    double anchor = 0.0;
};

enum class ScaleKind { Linear, Normalized };

// Affine pixel-to-value map for one axis. Normalized scales clamp their
// output to [0, 1].
struct AxisScale {
    ScaleKind kind = ScaleKind::Normalized;
    double slope = 0.0;
    double intercept = 0.0;
    double span_start = 0.0;
    double span_end = 0.0;
    std::optional<std::string> label;

    double apply(double pixel) const;
};

// Strict numeric reader for recognizer output: optional sign, decimal point,
// thousands commas, and e-notation. Anything else (letters, empty input)
// throws NonNumeric.
double parse_numeric(std::string_view text);

// True when, after sorting by anchor, both the values and the anchors step by
// a near-constant amount (every step within `tolerance` relative deviation of
// the mean step, mean steps nonzero). Needs at least three labels, else
// throws TooFewLabels.
bool validate_arithmetic(const std::vector<NumericLabel>& labels, double tolerance = 0.05);

// True when the values (sorted by anchor) look like a geometric progression
// with common ratio away from 1: a log-scaled axis mislabeled as linear.
bool looks_geometric(const std::vector<NumericLabel>& labels, double tolerance = 0.05);

// Least-squares line through (anchor, value); throws ValidationFailed unless
// validate_arithmetic holds and DegenerateFit when the anchors do not spread.
AxisScale fit_axis_scale(const std::vector<NumericLabel>& labels, const AxisLine& axis,
                         double tolerance = 0.05);

// Fallback for unreadable axes: maps the axis pixel span onto [0, 1].
AxisScale make_normalized_scale(const AxisLine& axis);

// Applies the per-axis maps to every traced point; order and count preserved.
std::vector<PointXY> rescale_series(const std::vector<PointXY>& series, const AxisScale& x_scale,
                                    const AxisScale& y_scale);

}  // namespace plotdig
