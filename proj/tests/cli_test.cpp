#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "test_util.hpp"

namespace fs = std::filesystem;
using denmpipe::testing::fixture_path;
using denmpipe::testing::fresh_temp_dir;
using denmpipe::testing::read_file;
using denmpipe::testing::source_dir;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

CliResult run_cli(const std::string& args) {
    const std::string command =
        std::string(DENMPIPE_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buffer{};
    CliResult result;
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) return result;
    std::size_t n;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        result.output.append(buffer.data(), n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::map<std::string, std::string> snapshot_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file())
            files[fs::relative(entry.path(), root).string()] =
                read_file(entry.path().string());
    return files;
}

}  // namespace

TEST(Cli, DecodeGoldenPrintsMatchingJson) {
    const CliResult r =
        run_cli("decode --uper " + fixture_path("golden/golden_denm_1.uper"));
    ASSERT_EQ(r.exit_code, 0);
    const auto decoded = nlohmann::json::parse(r.output);
    const auto expected = nlohmann::json::parse(
        read_file(fixture_path("golden/golden_denm_1.json")));
    EXPECT_EQ(decoded, expected);
}

TEST(Cli, EncodeReproducesCommittedHex) {
    const auto dir = fresh_temp_dir("cli_encode");
    for (int i = 1; i <= 6; ++i) {
        const std::string name = "golden_denm_" + std::to_string(i);
        const std::string out = (dir / (name + ".uper")).string();
        const CliResult r = run_cli("encode --json " +
                                    fixture_path("golden/" + name + ".json") +
                                    " --out " + out);
        ASSERT_EQ(r.exit_code, 0) << name;
        EXPECT_EQ(read_file(out), read_file(fixture_path("golden/" + name + ".uper")))
            << name;
    }
}

TEST(Cli, EncodeThenDecodeIsIdentity) {
    const auto dir = fresh_temp_dir("cli_roundtrip");
    for (int i = 1; i <= 6; ++i) {
        const std::string name = "golden_denm_" + std::to_string(i);
        const std::string uper = (dir / (name + ".uper")).string();
        ASSERT_EQ(run_cli("encode --json " + fixture_path("golden/" + name + ".json") +
                          " --out " + uper)
                      .exit_code,
                  0);
        const CliResult decoded = run_cli("decode --uper " + uper);
        ASSERT_EQ(decoded.exit_code, 0);
        EXPECT_EQ(nlohmann::json::parse(decoded.output),
                  nlohmann::json::parse(
                      read_file(fixture_path("golden/" + name + ".json"))))
            << name;
    }
}

TEST(Cli, ValidateGoldenIsCleanExitZero) {
    const CliResult r =
        run_cli("validate --json " + fixture_path("golden/golden_denm_1.json"));
    EXPECT_EQ(r.exit_code, 0);
    const auto report = nlohmann::json::parse(r.output);
    EXPECT_TRUE(report.at("valid").get<bool>());
}

TEST(Cli, ValidateBrokenListsViolationsExitTwo) {
    const auto dir = fresh_temp_dir("cli_validate");
    const std::string broken = (dir / "broken.json").string();
    std::ofstream(broken) << R"({
      "management": {
        "action_id": {"originating_station_id": -1, "sequence_number": 0},
        "detection_time_its_ms": 100,
        "reference_time_its_ms": 5,
        "event_position": {"latitude": 0, "longitude": 0, "altitude_cm": 0},
        "station_type": 15
      },
      "situation": {"information_quality": 3, "cause_code": 90, "sub_cause_code": 0},
      "alacarte": {"number_of_lanes": 3, "driving_lane_status": "11"}
    })";
    const CliResult r = run_cli("validate --json " + broken);
    EXPECT_EQ(r.exit_code, 2);
    const auto report = nlohmann::json::parse(r.output);
    EXPECT_FALSE(report.at("valid").get<bool>());
    EXPECT_GE(report.at("violations").size(), 3u);
}

TEST(Cli, ValidateUnparseableFileExitTwo) {
    const auto dir = fresh_temp_dir("cli_validate_bad");
    const std::string garbled = (dir / "garbled.json").string();
    std::ofstream(garbled) << "this is not json";
    const CliResult r = run_cli("validate --json " + garbled);
    EXPECT_EQ(r.exit_code, 2);
}

TEST(Cli, UnknownSubcommandIsUsageError) {
    EXPECT_EQ(run_cli("frobnicate").exit_code, 1);
    EXPECT_EQ(run_cli("").exit_code, 1);
}

TEST(Cli, StatsRendersFixtureAverages) {
    const CliResult r =
        run_cli("stats --log " + fixture_path("telemetry/gemini20.jsonl") +
                " --model gemini-2.0-flash");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("2386"), std::string::npos) << r.output;
    EXPECT_NE(r.output.find("2.64s"), std::string::npos) << r.output;
}

TEST(Cli, StatsJsonIsMachineParseable) {
    const CliResult r =
        run_cli("stats --log " + fixture_path("telemetry/gemini25.jsonl") +
                " --json");
    ASSERT_EQ(r.exit_code, 0);
    const auto doc = nlohmann::json::parse(r.output);
    ASSERT_EQ(doc.size(), 1u);
    EXPECT_EQ(doc[0].at("model_id"), "gemini-2.5-flash");
    EXPECT_DOUBLE_EQ(doc[0].at("avg_tokens_per_request").get<double>(), 2503.0);
    EXPECT_DOUBLE_EQ(doc[0].at("avg_latency_s").get<double>(), 12.29);
}

TEST(Cli, RunSmokeBundleProducesArtifacts) {
    const auto out = fresh_temp_dir("cli_run_smoke");
    const CliResult r = run_cli("run --config " + fixture_path("smoke/run.conf") +
                                " --out " + out.string());
    ASSERT_EQ(r.exit_code, 0) << r.output;
    EXPECT_TRUE(fs::exists(out / "accident_01.denm.json"));
    EXPECT_TRUE(fs::exists(out / "accident_01.uper"));
    EXPECT_TRUE(fs::exists(out / "accident_01.detect.json"));
    EXPECT_TRUE(fs::exists(out / "clear_road_01.detect.json"));
    EXPECT_FALSE(fs::exists(out / "clear_road_01.denm.json"));
    EXPECT_TRUE(fs::exists(out / "telemetry.jsonl"));
    EXPECT_FALSE(fs::exists(out / "errors.jsonl"));
}

TEST(Cli, RunTwiceIsByteIdentical) {
    const auto out_a = fresh_temp_dir("cli_run_a");
    const auto out_b = fresh_temp_dir("cli_run_b");
    for (const auto& out : {out_a, out_b}) {
        const CliResult r = run_cli("run --config " +
                                    fixture_path("smoke/run.conf") + " --out " +
                                    out.string());
        ASSERT_EQ(r.exit_code, 0);
    }
    EXPECT_EQ(snapshot_tree(out_a), snapshot_tree(out_b));
}

TEST(Cli, RunMissingConfigIsUsageError) {
    EXPECT_EQ(run_cli("run --config /nonexistent.conf --out /tmp/x").exit_code, 3);
    // config present but provider contradiction -> usage error
    const auto dir = fresh_temp_dir("cli_badconf");
    const std::string conf = (dir / "bad.conf").string();
    std::ofstream(conf) << "provider = replay\n";
    EXPECT_EQ(run_cli("run --config " + conf + " --out " + dir.string()).exit_code,
              1);
}

TEST(Cli, RunWhereEveryImageFailsExitsThree) {
    const auto dir = fresh_temp_dir("cli_all_fail");
    // single-image manifest whose depth grid does not exist
    const std::string manifest = (dir / "manifest.jsonl").string();
    std::ofstream(manifest) << nlohmann::json{
        {"image_id", "accident_01"},
        {"path", fixture_path("smoke/images/accident_01.pgm")},
        {"camera_id", "cam_main"}}.dump() << "\n";
    const auto out = dir / "out";
    const CliResult r = run_cli(
        "run --manifest " + manifest + " --cameras " +
        fixture_path("smoke/cameras.json") + " --provider replay" +
        " --replay-bundle " + fixture_path("smoke/replay") + " --depth-dir " +
        dir.string() + " --prompts " + source_dir() + "/prompts --out " +
        out.string() + " --fixed-clock 694310400000");
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_TRUE(fs::exists(out / "errors.jsonl"));
}

TEST(Cli, RunThenEvalReproducesTargetReport) {
    const auto out = fresh_temp_dir("cli_run_corpus");
    const CliResult run = run_cli(
        "run --config " + fixture_path("highway103/run_gemini20.conf") + " --out " +
        out.string());
    ASSERT_EQ(run.exit_code, 0) << run.output;

    const auto report_dir = fresh_temp_dir("cli_eval_corpus");
    const CliResult eval = run_cli("eval --pred " + out.string() + " --gt " +
                                   fixture_path("highway103/gt.csv") + " --out " +
                                   report_dir.string());
    ASSERT_EQ(eval.exit_code, 0);
    const std::string report = read_file((report_dir / "report.txt").string());
    for (const char* cell : {"96.12%", "100%", "92.98%", "96.36%"})
        EXPECT_NE(report.find(cell), std::string::npos) << cell << "\n" << report;
    const auto json_report =
        nlohmann::json::parse(read_file((report_dir / "report.json").string()));
    EXPECT_EQ(json_report.at("detection").at("tp").get<int>(), 53);
    EXPECT_DOUBLE_EQ(json_report.at("schema").at("accuracy").get<double>(), 1.0);

    const CliResult stats = run_cli("stats --log " +
                                    (out / "telemetry.jsonl").string());
    ASSERT_EQ(stats.exit_code, 0);
    EXPECT_NE(stats.output.find("2386"), std::string::npos);
    EXPECT_NE(stats.output.find("2.64s"), std::string::npos);
}
