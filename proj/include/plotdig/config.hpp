#pragma once

#include <filesystem>
#include <string_view>

namespace plotdig {

// Every tunable of the digitizing pipeline, with working defaults. Loaded
// from a flat key=value file; keys are named exactly like the fields.
struct PipelineConfig {
    int whiten_threshold = 245;          // channel floor for background white
    double gutter_white_fraction = 0.98; // row/column whiteness for panel splits
    int gutter_min_band_px = 8;          // minimum gutter width
    double dbscan_eps = 25.0;            // RGB neighborhood radius
    int dbscan_min_pts = 0;              // 0 = calibrate per image
    bool assign_noise_to_nearest = false;
    double match_w_dist = 8.0;           // text matcher distance weight
    double match_w_color = 6.0;          // text matcher color weight
    double match_bias = 4.0;             // text matcher bias term
    double arith_tolerance = 0.05;       // axis step deviation tolerance
    int jobs = 1;                        // figures digitized concurrently
};

// Parses "key = value" lines; '#' starts a comment; blank lines are skipped.
// Unknown keys and out-of-range values throw ConfigError.
PipelineConfig parse_config(std::string_view text);

PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace plotdig
