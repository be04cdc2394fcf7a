#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "adaptct/config.hpp"
#include "adaptct/io.hpp"

using namespace adaptct;
namespace fs = std::filesystem;

#ifdef ADAPTCT_CLI_PATH

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

CliResult run_cli(const std::string& args, const std::string& tag) {
    const std::string dir = (fs::temp_directory_path() / "adaptct_cli_test").string();
    fs::create_directories(dir);
    const std::string log = dir + "/" + tag + ".log";
    const std::string cmd = std::string(ADAPTCT_CLI_PATH) + " " + args + " > " + log + " 2>&1";
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.output = read_text_file(log);
    return r;
}

std::string work_dir(const std::string& name) {
    const std::string dir = (fs::temp_directory_path() / "adaptct_cli_test" / name).string();
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string minimal_config(const std::string& dir) {
    const std::string path = dir + "/config.json";
    write_text_file(path, R"({
  "phantom": {
    "dims": [1, 32, 32],
    "scale": 0.01,
    "shapes": [
      {"type": "box", "center": [0, 14, 16], "size": [1, 10, 16], "rot_z_deg": 30},
      {"type": "sphere", "center": [0, 22, 10], "radius": 4}
    ]
  },
  "num_views": 2,
  "recon": {"beta": 20.0, "max_iterations": 40, "tolerance": 1e-4},
  "seed": 7
})");
    return path;
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

} // namespace

TEST_CASE("cli reports a missing config file with exit code 1") {
    const CliResult r = run_cli("run --config /definitely/not/here.json", "missing");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("not found") != std::string::npos);
}

TEST_CASE("cli smoke run writes a 3-row trace and a manifest") {
    const std::string dir = work_dir("smoke");
    const std::string config = minimal_config(dir);
    const CliResult r = run_cli("run --config " + config + " --out " + dir + "/out", "smoke");
    CHECK(r.exit_code == 0);

    const std::string trace = read_text_file(dir + "/out/trace.csv");
    CHECK(count_lines(trace) == 4); // header + initial + 2 steps

    const ExperimentConfig echoed = load_config_file(dir + "/out/manifest.json");
    CHECK(echoed.num_views == 2);
    CHECK(echoed.seed == 7);
    const std::string manifest = read_text_file(dir + "/out/manifest.json");
    CHECK(manifest.find("\"status\": \"complete\"") != std::string::npos);
}

TEST_CASE("cli overrides are echoed verbatim in the manifest") {
    const std::string dir = work_dir("override");
    const std::string config = minimal_config(dir);
    const CliResult r = run_cli("run --config " + config + " --set gamma=2.5 --out " + dir + "/out",
                                "override");
    CHECK(r.exit_code == 0);
    const ExperimentConfig echoed = load_config_file(dir + "/out/manifest.json");
    CHECK(echoed.gamma == 2.5);
}

TEST_CASE("a rerun from the manifest reproduces the trace bytes") {
    const std::string dir = work_dir("rerun");
    const std::string config = minimal_config(dir);
    CHECK(run_cli("run --config " + config + " --out " + dir + "/a", "rerun_a").exit_code == 0);
    CHECK(run_cli("run --config " + dir + "/a/manifest.json --out " + dir + "/b", "rerun_b")
              .exit_code == 0);
    CHECK(read_text_file(dir + "/a/trace.csv") == read_text_file(dir + "/b/trace.csv"));
}

TEST_CASE("cli phantom and score subcommands produce the diagnostic curves") {
    const std::string dir = work_dir("score");
    const std::string config = minimal_config(dir);
    CHECK(run_cli("phantom --config " + config + " --out " + dir + "/ph", "phantom").exit_code == 0);
    CHECK(fs::exists(dir + "/ph/phantom.raw"));
    CHECK(fs::exists(dir + "/ph/slices/slice_000.png"));

    const CliResult r = run_cli("score " + dir + "/ph/phantom.raw --selected 90 --out " + dir + "/sc",
                                "score");
    CHECK(r.exit_code == 0);
    const std::string f_curve = read_text_file(dir + "/sc/f_curve.csv");
    CHECK(count_lines(f_curve) == 181); // header + 180 angles
    // h with a single selected angle at 90 peaks at 0 (wraparound maximum)
    const std::string h_curve = read_text_file(dir + "/sc/h_curve.csv");
    REQUIRE(count_lines(h_curve) == 181);
    const std::size_t first_row = h_curve.find('\n') + 1;
    const std::size_t second_row = h_curve.find('\n', first_row);
    CHECK(h_curve.substr(first_row, second_row - first_row) == "0,1");
}

TEST_CASE("score on an unreadable volume fails with a runtime exit code") {
    const CliResult r = run_cli("score /definitely/not/here.raw", "score_missing");
    CHECK(r.exit_code == 2);
}

#endif // ADAPTCT_CLI_PATH
