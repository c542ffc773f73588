#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plotdig/config.hpp"
#include "plotdig/eval.hpp"
#include "plotdig/pipeline.hpp"
#include "plotdig/synth.hpp"

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_digitize(const std::string& input_dir, const std::string& out_dir,
                 const std::string& config_path, int jobs)
{
    plotdig::PipelineConfig config;
    if (!config_path.empty()) {
        config = plotdig::load_config(config_path);
    }
    if (jobs > 0) {
        config.jobs = jobs;
    }
    const auto results = plotdig::digitize_directory(input_dir, out_dir, config);
    int failures = 0;
    for (const auto& item : results) {
        if (item.ok) {
            std::cout << "ok   " << item.input.filename().string() << " -> "
                      << item.graphs_written << " graph(s)\n";
        } else {
            ++failures;
            std::cout << "fail " << item.input.filename().string() << ": " << item.message
                      << "\n";
        }
    }
    std::cout << results.size() << " file(s), " << failures << " failure(s)\n";
    return 0;
}

int run_filter(const std::string& out_dir, const std::vector<std::string>& keywords,
               const std::string& x_label, const std::string& y_label, double max_edit_ratio,
               std::optional<double> x_max)
{
    std::vector<fs::path> graph_files;
    for (const auto& entry : fs::directory_iterator(out_dir)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        const std::string name = entry.path().filename().string();
        if (name.find(".graph") != std::string::npos && name.ends_with(".json")) {
            graph_files.push_back(entry.path());
        }
    }
    std::sort(graph_files.begin(), graph_files.end());

    for (const auto& path : graph_files) {
        const plotdig::DigitizedGraph graph = plotdig::parse_graph_json(slurp(path));
        if (!keywords.empty()) {
            std::string stem = path.filename().string();
            stem.erase(stem.find(".graph"));
            const fs::path caption_path = path.parent_path() / (stem + ".caption.txt");
            const std::string caption =
                fs::exists(caption_path) ? slurp(caption_path) : std::string();
            if (!plotdig::filter_by_caption(caption, keywords)) {
                continue;
            }
        }
        if (!plotdig::filter_by_axis(graph, x_label, y_label, max_edit_ratio, x_max)) {
            continue;
        }
        std::cout << path.string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"chart digitizer: images in, per-series value tables out"};
    app.require_subcommand(1);

    auto* digitize = app.add_subcommand("digitize", "digitize every chart image in a directory");
    std::string input_dir, out_dir, config_path;
    int jobs = 0;
    digitize->add_option("input-dir", input_dir, "directory of *.png/*.jpg charts")->required();
    digitize->add_option("--out", out_dir, "output directory for graph JSON")->required();
    digitize->add_option("--config", config_path, "key=value config file");
    digitize->add_option("--jobs", jobs, "figures digitized concurrently");

    auto* filter = app.add_subcommand("filter", "list digitized graphs passing mining criteria");
    std::string filter_dir, x_label, y_label;
    std::vector<std::string> keywords;
    double max_edit_ratio = 0.3;
    double x_max_value = 0.0;
    filter->add_option("out-dir", filter_dir, "directory written by digitize")->required();
    filter->add_option("--caption-keywords", keywords, "keywords; any match keeps the graph");
    filter->add_option("--x-label", x_label, "required x axis label (fuzzy)");
    filter->add_option("--y-label", y_label, "required y axis label (fuzzy)");
    filter->add_option("--max-edit-ratio", max_edit_ratio, "label edit-distance ratio cap");
    auto* x_max_opt = filter->add_option("--x-max", x_max_value, "largest admissible x value");

    auto* synth = app.add_subcommand("synth", "generate charts with ground truth");
    int count = 1;
    std::uint64_t seed = 0;
    std::string synth_out;
    plotdig::SynthOptions synth_options;
    synth->add_option("--count", count, "number of charts")->required();
    synth->add_option("--seed", seed, "corpus seed")->required();
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--min-color-dist", synth_options.min_color_distance,
                      "pairwise palette distance floor");
    synth->add_flag("--noise", synth_options.noise, "halo-blend the data lines");

    auto* eval = app.add_subcommand("eval", "score digitizer output against ground truth");
    std::string pred_dir, truth_dir, report_path;
    double color_gate = 60.0;
    eval->add_option("--pred", pred_dir, "directory of graph JSON")->required();
    eval->add_option("--truth", truth_dir, "directory of truth JSON")->required();
    eval->add_option("--report", report_path, "report file to write")->required();
    eval->add_option("--color-gate", color_gate, "matched color distance gate");

    CLI11_PARSE(app, argc, argv);

    try {
        if (digitize->parsed()) {
            return run_digitize(input_dir, out_dir, config_path, jobs);
        }
        if (filter->parsed()) {
            std::optional<double> x_max;
            if (x_max_opt->count() > 0) {
                x_max = x_max_value;
            }
            return run_filter(filter_dir, keywords, x_label, y_label, max_edit_ratio, x_max);
        }
        if (synth->parsed()) {
            plotdig::write_corpus(synth_out, count, seed, synth_options);
            std::cout << "wrote " << count << " chart(s) to " << synth_out << "\n";
            return 0;
        }
        if (eval->parsed()) {
            const plotdig::EvalReport report =
                plotdig::evaluate_corpus(pred_dir, truth_dir, color_gate);
            plotdig::write_text_atomic(report_path, plotdig::report_json(report));
            std::cout << "separation " << report.data_line_separation_accuracy << ", assignment "
                      << report.legend_assignment_accuracy << ", fidelity "
                      << report.value_fidelity_rate << ", mAP50 " << report.map_50 << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
