#include "plotdig/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

#include "plotdig/errors.hpp"
#include "plotdig/scale.hpp"

namespace plotdig {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

double number_value(std::string_view key, std::string_view value)
{
    try {
        return parse_numeric(value);
    } catch (const NonNumeric&) {
        throw ConfigError("config key \"" + std::string(key) + "\": expected a number, got \"" +
                          std::string(value) + "\"");
    }
}

int int_value(std::string_view key, std::string_view value)
{
    const double v = number_value(key, value);
    const int i = int(v);
    if (double(i) != v) {
        throw ConfigError("config key \"" + std::string(key) + "\": expected an integer");
    }
    return i;
}

bool bool_value(std::string_view key, std::string_view value)
{
    if (value == "true" || value == "1") {
        return true;
    }
    if (value == "false" || value == "0") {
        return false;
    }
    throw ConfigError("config key \"" + std::string(key) + "\": expected true or false");
}

void check(bool ok, std::string_view key, const char* requirement)
{
    if (!ok) {
        throw ConfigError("config key \"" + std::string(key) + "\": " + requirement);
    }
}

}  // namespace

PipelineConfig parse_config(std::string_view text)
{
    PipelineConfig config;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));

        if (key == "whiten_threshold") {
            config.whiten_threshold = int_value(key, value);
            check(config.whiten_threshold >= 0 && config.whiten_threshold <= 256, key,
                  "must be in [0, 256]");
        } else if (key == "gutter_white_fraction") {
            config.gutter_white_fraction = number_value(key, value);
            check(config.gutter_white_fraction >= 0.0 && config.gutter_white_fraction <= 1.0, key,
                  "must be in [0, 1]");
        } else if (key == "gutter_min_band_px") {
            config.gutter_min_band_px = int_value(key, value);
            check(config.gutter_min_band_px >= 1, key, "must be >= 1");
        } else if (key == "dbscan_eps") {
            config.dbscan_eps = number_value(key, value);
            check(config.dbscan_eps > 0.0, key, "must be > 0");
        } else if (key == "dbscan_min_pts") {
            config.dbscan_min_pts = int_value(key, value);
            check(config.dbscan_min_pts >= 0, key, "must be >= 0 (0 = auto)");
        } else if (key == "assign_noise_to_nearest") {
            config.assign_noise_to_nearest = bool_value(key, value);
        } else if (key == "match_w_dist") {
            config.match_w_dist = number_value(key, value);
        } else if (key == "match_w_color") {
            config.match_w_color = number_value(key, value);
        } else if (key == "match_bias") {
            config.match_bias = number_value(key, value);
        } else if (key == "arith_tolerance") {
            config.arith_tolerance = number_value(key, value);
            check(config.arith_tolerance >= 0.0 && config.arith_tolerance < 1.0, key,
                  "must be in [0, 1)");
        } else if (key == "jobs") {
            config.jobs = int_value(key, value);
            check(config.jobs >= 1, key, "must be >= 1");
        } else {
            throw ConfigError("unknown config key \"" + std::string(key) + "\"");
        }
    }
    return config;
}

PipelineConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileNotFound("config file not found: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace plotdig
