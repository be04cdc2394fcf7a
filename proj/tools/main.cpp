// Command-line front end: configure, run and inspect adaptive view-angle
// selection experiments.
//
// Exit codes: 0 success, 1 usage/config error, 2 runtime error.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adaptct/config.hpp"
#include "adaptct/io.hpp"
#include "adaptct/version.hpp"
#include "adaptct/workflow.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace adaptct;

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    int threads = -1;
    long long seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
    auto* opt = cmd->add_option("--config", args.config_path, "JSON config (or run manifest) path");
    if (config_required) opt->required();
    cmd->add_option("--set", args.overrides, "dotted-path override KEY=VALUE (repeatable)");
    cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
    cmd->add_option("--threads", args.threads, "max worker threads (0 = hardware)");
    cmd->add_option("--seed", args.seed, "experiment seed (overrides config)");
}

ExperimentConfig resolve_config(const CommonArgs& args) {
    json doc = json::object();
    if (!args.config_path.empty()) {
        // reuse the line-numbered parse diagnostics, then re-read the raw doc
        (void)load_config_file(args.config_path);
        doc = json::parse(read_text_file(args.config_path));
        if (doc.contains("config") && doc.contains("artifacts")) doc = doc["config"];
    }
    for (const std::string& kv : args.overrides) apply_override(doc, kv);
    ExperimentConfig config = config_from_json(doc);
    if (!args.out_dir.empty()) config.output_dir = args.out_dir;
    if (args.threads >= 0) config.max_threads = args.threads;
    if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
    return config;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json manifest_skeleton(const ExperimentConfig& config) {
    json m;
    m["tool"] = {{"name", "adaptct"}, {"version", kVersion}};
    m["created_utc"] = timestamp_utc();
    m["config"] = config_to_json(config);
    m["artifacts"] = json::object();
    m["status"] = "running";
    return m;
}

void write_manifest(const std::string& dir, const json& manifest) {
    write_text_file(dir + "/manifest.json", manifest.dump(2) + "\n");
}

json artifacts_json(const RunArtifacts& art) {
    json a;
    a["trace_csv"] = art.trace_csv;
    a["timings_csv"] = art.timings_csv;
    a["angles_txt"] = art.angles_txt;
    a["final_volume"] = art.final_volume;
    a["slices_dir"] = art.slices_dir;
    a["score_tables"] = art.score_tables;
    if (!art.snapshot_volumes.empty()) a["snapshot_volumes"] = art.snapshot_volumes;
    a["slice_normalization"] = {{"lo", art.norm_lo}, {"hi", art.norm_hi}};
    return a;
}

int cmd_run(const CommonArgs& args) {
    ExperimentConfig config = resolve_config(args);
    if (config.output_dir.empty()) config.output_dir = "adaptct_run";
    fs::create_directories(config.output_dir);
    json manifest = manifest_skeleton(config);
    write_manifest(config.output_dir, manifest);
    try {
        const ExperimentTrace trace = run_experiment(config);
        const RunArtifacts art = write_run_artifacts(config.output_dir, trace);
        manifest["artifacts"] = artifacts_json(art);
        manifest["status"] = trace.truncated ? "complete-truncated" : "complete";
        manifest["final_nrmse"] = trace.entries.back().nrmse;
        write_manifest(config.output_dir, manifest);
        std::cout << "run complete: " << trace.entries.size() << " reconstructions, final NRMSE "
                  << format_double(trace.entries.back().nrmse) << "\n"
                  << "outputs in " << config.output_dir << "\n";
        return 0;
    } catch (const std::exception& e) {
        manifest["status"] = "partial";
        manifest["error"] = e.what();
        write_manifest(config.output_dir, manifest);
        throw;
    }
}

int cmd_compare(const CommonArgs& args) {
    ExperimentConfig config = resolve_config(args);
    if (config.output_dir.empty()) config.output_dir = "adaptct_compare";
    fs::create_directories(config.output_dir);

    ExperimentConfig baseline = config;
    baseline.method = method_from_name(config.compare_baseline);
    json manifest = manifest_skeleton(config);
    manifest["baseline_method"] = method_name(baseline.method);
    write_manifest(config.output_dir, manifest);
    try {
        const ComparisonResult result = run_comparison(config, baseline);

        const std::string dir_a = config.output_dir + "/" + method_name(config.method);
        const std::string dir_b = config.output_dir + "/baseline_" + method_name(baseline.method);
        const RunArtifacts art_a = write_run_artifacts(dir_a, result.trace_a);
        const RunArtifacts art_b = write_run_artifacts(dir_b, result.trace_b);

        std::string curves = "views,nrmse_" + method_name(config.method) + ",nrmse_" +
                             method_name(baseline.method) + "\n";
        const std::size_t n =
            std::min(result.trace_a.entries.size(), result.trace_b.entries.size());
        for (std::size_t i = 0; i < n; ++i) {
            curves += std::to_string(result.trace_a.entries[i].views_total);
            curves += ',';
            curves += format_double(result.trace_a.entries[i].nrmse);
            curves += ',';
            curves += format_double(result.trace_b.entries[i].nrmse);
            curves += '\n';
        }
        write_text_file(config.output_dir + "/comparison.csv", curves);

        json summary;
        summary["thresholds"] = result.thresholds;
        summary["crossing_views"][method_name(config.method)] = result.crossing_views_a;
        summary["crossing_views"][method_name(baseline.method)] = result.crossing_views_b;
        write_text_file(config.output_dir + "/summary.json", summary.dump(2) + "\n");

        manifest["artifacts"] = {{"comparison_csv", config.output_dir + "/comparison.csv"},
                                 {"summary_json", config.output_dir + "/summary.json"},
                                 {"run", artifacts_json(art_a)},
                                 {"baseline", artifacts_json(art_b)}};
        manifest["status"] = "complete";
        write_manifest(config.output_dir, manifest);
        std::cout << "comparison complete; outputs in " << config.output_dir << "\n";
        return 0;
    } catch (const std::exception& e) {
        manifest["status"] = "partial";
        manifest["error"] = e.what();
        write_manifest(config.output_dir, manifest);
        throw;
    }
}

int cmd_score(const CommonArgs& args, const std::string& volume_path,
              const std::vector<double>& selected_angles) {
    ExperimentConfig config = resolve_config(args);
    if (config.output_dir.empty()) config.output_dir = "adaptct_score";
    set_max_threads(config.max_threads);
    const Volume volume = read_volume_raw(volume_path);

    std::vector<double> grid;
    for (double a = 0.0; a < 180.0 - 1e-9; a += config.grid_step_deg) grid.push_back(a);

    fs::create_directories(config.output_dir);
    const EdgeAlignmentResult table = edge_alignment_table(volume, grid, config.edges);
    std::string f_csv = "angle_deg,f\n";
    for (std::size_t j = 0; j < grid.size(); ++j) {
        f_csv += format_double(grid[j]);
        f_csv += ',';
        f_csv += format_double(table.f[j]);
        f_csv += '\n';
    }
    write_text_file(config.output_dir + "/f_curve.csv", f_csv);
    std::cout << "wrote " << config.output_dir << "/f_curve.csv\n";

    if (!selected_angles.empty()) {
        const AngleSpacingResult hs = angle_spacing_table(grid, selected_angles, config.alpha);
        std::string h_csv = "angle_deg,h\n";
        for (std::size_t j = 0; j < grid.size(); ++j) {
            h_csv += format_double(grid[j]);
            h_csv += ',';
            h_csv += format_double(hs.h[j]);
            h_csv += '\n';
        }
        write_text_file(config.output_dir + "/h_curve.csv", h_csv);
        std::cout << "wrote " << config.output_dir << "/h_curve.csv\n";
    }
    return 0;
}

int cmd_phantom(const CommonArgs& args) {
    ExperimentConfig config = resolve_config(args);
    if (config.output_dir.empty()) config.output_dir = "adaptct_phantom";
    set_max_threads(config.max_threads);
    const Volume volume = generate_phantom(config.phantom);
    fs::create_directories(config.output_dir);
    const std::string raw = config.output_dir + "/phantom.raw";
    write_volume_raw(volume, raw);
    const auto [lo, hi] = write_volume_slices(volume, config.output_dir + "/slices");

    json manifest = manifest_skeleton(config);
    manifest["artifacts"] = {{"volume", raw},
                             {"slices_dir", config.output_dir + "/slices"},
                             {"slice_normalization", {{"lo", lo}, {"hi", hi}}}};
    manifest["status"] = "complete";
    write_manifest(config.output_dir, manifest);
    std::cout << "wrote " << raw << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive view-angle selection for parallel-beam CT"};
    app.set_version_flag("--version", std::string("adaptct ") + kVersion);
    app.require_subcommand(1);

    CommonArgs run_args, compare_args, score_args, phantom_args;
    std::string volume_path;
    std::vector<double> selected_angles;

    CLI::App* run = app.add_subcommand("run", "run one acquisition/reconstruction experiment");
    add_common(run, run_args, true);

    CLI::App* compare = app.add_subcommand("compare", "paired run against the baseline method");
    add_common(compare, compare_args, true);

    CLI::App* score = app.add_subcommand("score", "edge-alignment / angle-spacing curves for a volume");
    score->add_option("volume", volume_path, "raw volume file")->required();
    score->add_option("--selected", selected_angles, "measured angles for the spacing curve");
    add_common(score, score_args, false);

    CLI::App* phantom = app.add_subcommand("phantom", "generate and save the configured phantom");
    add_common(phantom, phantom_args, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (compare->parsed()) return cmd_compare(compare_args);
        if (score->parsed()) return cmd_score(score_args, volume_path, selected_angles);
        if (phantom->parsed()) return cmd_phantom(phantom_args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
