// Acceptance suite: every release criterion in one binary, one PASS/FAIL
// line per criterion. Criteria that need pipeline outputs run the full
// 103-frame replay corpus once per model profile and share the results.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>

#include "denmpipe/agents/pipeline.hpp"
#include "denmpipe/denm/json.hpp"
#include "denmpipe/eval/ground_truth.hpp"
#include "denmpipe/eval/metrics.hpp"
#include "denmpipe/eval/predictions.hpp"
#include "denmpipe/eval/report.hpp"
#include "denmpipe/providers/replay.hpp"
#include "denmpipe/telemetry/aggregate.hpp"
#include "denmpipe/uper/codec.hpp"
#include "denmpipe/uper/hex.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace denmpipe;
using denmpipe::testing::fixture_path;
using denmpipe::testing::fresh_temp_dir;
using denmpipe::testing::make_random_denm;
using denmpipe::testing::read_file;
using denmpipe::testing::source_dir;

namespace {

constexpr std::int64_t kFixedClock = 694310400000;

void announce(int criterion, const std::string& what) {
    const bool failed = ::testing::Test::HasFailure();
    std::printf("[ACCEPTANCE] criterion %2d  %-46s %s\n", criterion, what.c_str(),
                failed ? "FAIL" : "PASS");
}

struct ProfileRun {
    fs::path out_dir;
    std::vector<RequestRecord> telemetry;
    LoadedPredictions predictions;
};

ProfileRun execute_profile(const std::string& profile, const std::string& tag) {
    ReplayProvider model(
        ReplayBundle::load(fixture_path("highway103/replay/" + profile)));
    FileDepthProvider depth(fixture_path("highway103/depth"));

    PipelineContext ctx;
    ctx.model = &model;
    ctx.depth = &depth;
    ctx.prompts = PromptSet::load(source_dir() + "/prompts");
    ctx.cameras = load_camera_config(fixture_path("highway103/cameras.json"));
    ctx.clock = [] { return kFixedClock; };

    ProfileRun run;
    run.out_dir = fresh_temp_dir("acceptance_" + profile + "_" + tag);
    ctx.output_dir = run.out_dir.string();

    const auto manifest = load_manifest(fixture_path("highway103/manifest.jsonl"));
    TelemetryLog log((run.out_dir / "telemetry.jsonl").string());
    const BatchResult result = run_batch(manifest, ctx, log, 4);
    EXPECT_EQ(result.failed, 0u) << profile;
    EXPECT_EQ(result.succeeded, manifest.size());

    run.telemetry = read_telemetry_log((run.out_dir / "telemetry.jsonl").string());
    run.predictions = load_predictions(run.out_dir.string());
    return run;
}

const ProfileRun& profile_run(const std::string& profile) {
    static std::map<std::string, ProfileRun> cache;
    auto it = cache.find(profile);
    if (it == cache.end())
        it = cache.emplace(profile, execute_profile(profile, "main")).first;
    return it->second;
}

struct Counts {
    std::int64_t tp, fp, tn, fn;
};

/// All confusion matrices over N images whose four ratios round (to two
/// decimals, in percent) to the given targets.
std::vector<Counts> solve_confusion(std::int64_t n, double acc_pct,
                                    double rec_pct, double prec_pct,
                                    double f1_pct) {
    auto round2 = [](double x) { return std::round(x * 10000.0) / 100.0; };
    std::vector<Counts> solutions;
    for (std::int64_t tp = 0; tp <= n; ++tp)
        for (std::int64_t fp = 0; fp + tp <= n; ++fp)
            for (std::int64_t tn = 0; tp + fp + tn <= n; ++tn) {
                const std::int64_t fn = n - tp - fp - tn;
                if (tp + fn == 0 || tp + fp == 0) continue;
                const double rec = double(tp) / double(tp + fn);
                const double prec = double(tp) / double(tp + fp);
                if (prec + rec == 0) continue;
                const double acc = double(tp + tn) / double(n);
                const double f1 = 2 * prec * rec / (prec + rec);
                if (round2(acc) == acc_pct && round2(rec) == rec_pct &&
                    round2(prec) == prec_pct && round2(f1) == f1_pct)
                    solutions.push_back({tp, fp, tn, fn});
            }
    return solutions;
}

DetectionMetrics score_counts_via_instance(const Counts& c) {
    std::vector<GroundTruthRow> gt;
    std::map<std::string, SituationType> preds;
    std::int64_t next = 0;
    auto add = [&](bool positive, bool predicted) {
        GroundTruthRow row;
        row.image_id = "x_" + std::to_string(next++);
        row.situation_present = positive;
        if (positive) {
            row.number_of_lanes = 2;
            row.driving_lane_status = "11";
            row.cause_code = 2;
        }
        gt.push_back(row);
        preds[row.image_id] = predicted ? SituationType::DENM : SituationType::NONE;
    };
    for (std::int64_t i = 0; i < c.tp; ++i) add(true, true);
    for (std::int64_t i = 0; i < c.fn; ++i) add(true, false);
    for (std::int64_t i = 0; i < c.fp; ++i) add(false, true);
    for (std::int64_t i = 0; i < c.tn; ++i) add(false, false);
    return score_detection(preds, gt);
}

}  // namespace

TEST(Acceptance, C01_UperRoundTrip10k) {
    const auto started = std::chrono::steady_clock::now();
    std::mt19937_64 rng(0xacce97a0);
    std::size_t failures = 0;
    for (int i = 0; i < 10000; ++i) {
        const Denm d = make_random_denm(rng);
        if (decode_denm(encode_denm(d)) != d) ++failures;
    }
    const double elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    EXPECT_EQ(failures, 0u);
    EXPECT_LT(elapsed_s, 10.0);
    announce(1, "UPER round trip, 10k randomized messages");
}

TEST(Acceptance, C02_GoldenVectors) {
    // hand-derived situation fragment
    BitSink sink;
    wire::encode_situation(sink, SituationContainer{3, 90, 0});
    EXPECT_EQ(payload_to_hex(sink.payload()), "6B4000");

    for (int i = 1; i <= 6; ++i) {
        const std::string name = "golden_denm_" + std::to_string(i);
        const Denm d = read_denm_json_file(fixture_path("golden/" + name + ".json"));
        std::string expected = read_file(fixture_path("golden/" + name + ".uper"));
        while (!expected.empty() && expected.back() == '\n') expected.pop_back();
        EXPECT_EQ(payload_to_hex(encode_denm(d)), expected) << name;
        EXPECT_EQ(decode_denm(hex_to_payload(expected)), d) << name;
    }
    announce(2, "golden vectors byte-for-byte (6 pairs)");
}

TEST(Acceptance, C03_SchemaValidityIsPerfect) {
    for (const char* profile : {"gemini20", "gemini25"}) {
        const ProfileRun& run = profile_run(profile);
        const SchemaMetrics schema = score_schema(run.out_dir.string());
        EXPECT_GT(schema.total_generated, 0) << profile;
        ASSERT_TRUE(schema.accuracy.has_value()) << profile;
        EXPECT_DOUBLE_EQ(*schema.accuracy, 1.0)
            << profile << ": "
            << (schema.failures.empty() ? "" : schema.failures.front());
    }
    announce(3, "message schema validity 100% on both profiles");
}

TEST(Acceptance, C04_DetectionArithmetic) {
    // the printed percentages pin a unique confusion matrix at N=103
    const auto sols20 = solve_confusion(103, 96.12, 100.0, 92.98, 96.36);
    ASSERT_EQ(sols20.size(), 1u);
    EXPECT_EQ(sols20[0].tp, 53);
    EXPECT_EQ(sols20[0].fp, 4);
    EXPECT_EQ(sols20[0].tn, 46);
    EXPECT_EQ(sols20[0].fn, 0);

    const auto sols25 = solve_confusion(103, 90.29, 100.0, 84.13, 91.38);
    ASSERT_EQ(sols25.size(), 1u);
    EXPECT_EQ(sols25[0].tp, 53);
    EXPECT_EQ(sols25[0].fp, 10);
    EXPECT_EQ(sols25[0].tn, 40);
    EXPECT_EQ(sols25[0].fn, 0);

    const DetectionMetrics m20 = score_counts_via_instance(sols20[0]);
    EXPECT_NEAR(*m20.accuracy * 100.0, 96.12, 0.01);
    EXPECT_NEAR(*m20.recall * 100.0, 100.0, 0.01);
    EXPECT_NEAR(*m20.precision * 100.0, 92.98, 0.01);
    EXPECT_NEAR(*m20.f1 * 100.0, 96.36, 0.01);

    const DetectionMetrics m25 = score_counts_via_instance(sols25[0]);
    EXPECT_NEAR(*m25.accuracy * 100.0, 90.29, 0.01);
    EXPECT_NEAR(*m25.recall * 100.0, 100.0, 0.01);
    EXPECT_NEAR(*m25.precision * 100.0, 84.13, 0.01);
    EXPECT_NEAR(*m25.f1 * 100.0, 91.38, 0.01);

    // the replay corpus realizes the same matrices end to end
    const auto gt = load_ground_truth(fixture_path("highway103/gt.csv"));
    const DetectionMetrics r20 =
        score_detection(profile_run("gemini20").predictions.detection, gt);
    EXPECT_EQ(r20.tp, 53);
    EXPECT_EQ(r20.fp, 4);
    EXPECT_EQ(r20.tn, 46);
    EXPECT_EQ(r20.fn, 0);
    const DetectionMetrics r25 =
        score_detection(profile_run("gemini25").predictions.detection, gt);
    EXPECT_EQ(r25.tp, 53);
    EXPECT_EQ(r25.fp, 10);
    EXPECT_EQ(r25.tn, 40);
    EXPECT_EQ(r25.fn, 0);
    announce(4, "detection metrics reproduce both profiles to +-0.01pp");
}

TEST(Acceptance, C05_FieldAccuracies) {
    const auto gt = load_ground_truth(fixture_path("highway103/gt.csv"));
    const ProfileRun& run = profile_run("gemini20");
    const FieldMetrics fields = score_fields(run.predictions.fields, gt);
    ASSERT_EQ(fields.denominator, 53);
    EXPECT_NEAR(*fields.lanes_accuracy * 100.0, 56.31, 0.5);
    EXPECT_NEAR(*fields.lane_status_accuracy * 100.0, 47.57, 0.5);
    EXPECT_NEAR(*fields.cause_accuracy * 100.0, 77.67, 0.5);
    announce(5, "field accuracies within +-0.5pp of targets");
}

TEST(Acceptance, C06_RequestStatisticsAggregation) {
    const auto fixture20 =
        read_telemetry_log(fixture_path("telemetry/gemini20.jsonl"));
    const AggregateStats s20 = aggregate(fixture20, "gemini-2.0-flash");
    EXPECT_EQ(s20.request_count, 160);
    EXPECT_DOUBLE_EQ(*s20.avg_tokens_per_request, 2386.0);
    EXPECT_DOUBLE_EQ(s20.avg_latency_s, 2.64);

    const auto fixture25 =
        read_telemetry_log(fixture_path("telemetry/gemini25.jsonl"));
    const AggregateStats s25 = aggregate(fixture25, "gemini-2.5-flash");
    EXPECT_EQ(s25.request_count, 166);
    EXPECT_DOUBLE_EQ(*s25.avg_tokens_per_request, 2503.0);
    EXPECT_DOUBLE_EQ(s25.avg_latency_s, 12.29);

    // a live replay run aggregates to the same numbers
    const AggregateStats live =
        aggregate(profile_run("gemini20").telemetry, "gemini-2.0-flash");
    EXPECT_EQ(live.request_count, 160);
    EXPECT_DOUBLE_EQ(*live.avg_tokens_per_request, 2386.0);
    EXPECT_DOUBLE_EQ(live.avg_latency_s, 2.64);
    announce(6, "token/latency averages: 2386/2.64s and 2503/12.29s");
}

TEST(Acceptance, C07_RequestCountLaw) {
    for (const char* profile : {"gemini20", "gemini25"}) {
        const ProfileRun& run = profile_run(profile);
        std::map<std::string, std::pair<int, int>> per_image;
        for (const RequestRecord& r : run.telemetry) {
            auto& [detects, extracts] = per_image[r.image_id];
            (r.stage == Stage::detect ? detects : extracts)++;
        }
        EXPECT_EQ(per_image.size(), 103u);
        for (const auto& [image_id, verdict] : run.predictions.detection) {
            const auto& [detects, extracts] = per_image.at(image_id);
            EXPECT_EQ(detects, 1) << image_id;
            EXPECT_EQ(extracts, verdict == SituationType::DENM ? 1 : 0)
                << image_id;
        }
    }
    announce(7, "1 detect + (DENM ? 1 : 0) extract requests per image");
}

TEST(Acceptance, C08_DetectionOracleEquivalence) {
    // independent oracle: per-image comparison loop
    auto oracle = [](const std::map<std::string, SituationType>& preds,
                     const std::vector<GroundTruthRow>& gt) {
        std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
        for (const auto& row : gt) {
            const bool hit = preds.at(row.image_id) == SituationType::DENM;
            if (row.situation_present)
                hit ? ++tp : ++fn;
            else
                hit ? ++fp : ++tn;
        }
        return std::array<std::int64_t, 4>{tp, fp, tn, fn};
    };

    // exhaustive: every (label, prediction) assignment for N <= 8
    for (std::size_t n = 1; n <= 8; ++n) {
        const std::uint64_t combos = 1ull << (2 * n);
        for (std::uint64_t a = 0; a < combos; ++a) {
            std::vector<GroundTruthRow> gt;
            std::map<std::string, SituationType> preds;
            for (std::size_t i = 0; i < n; ++i) {
                GroundTruthRow row;
                row.image_id = "e_" + std::to_string(i);
                row.situation_present = (a >> (2 * i)) & 1;
                if (row.situation_present) {
                    row.number_of_lanes = 2;
                    row.driving_lane_status = "11";
                    row.cause_code = 2;
                }
                gt.push_back(row);
                preds[row.image_id] = ((a >> (2 * i + 1)) & 1)
                                          ? SituationType::DENM
                                          : SituationType::NONE;
            }
            const DetectionMetrics m = score_detection(preds, gt);
            const auto [tp, fp, tn, fn] = oracle(preds, gt);
            ASSERT_EQ(m.tp, tp);
            ASSERT_EQ(m.fp, fp);
            ASSERT_EQ(m.tn, tn);
            ASSERT_EQ(m.fn, fn);
        }
    }

    // randomized: 1000 instances up to N = 20
    std::mt19937_64 rng(0xacce97a8);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng() % 20;
        std::vector<GroundTruthRow> gt;
        std::map<std::string, SituationType> preds;
        for (std::size_t i = 0; i < n; ++i) {
            GroundTruthRow row;
            row.image_id = "r_" + std::to_string(i);
            row.situation_present = rng() & 1;
            if (row.situation_present) {
                row.number_of_lanes = 2;
                row.driving_lane_status = "11";
                row.cause_code = 2;
            }
            gt.push_back(row);
            preds[row.image_id] =
                (rng() & 1) ? SituationType::DENM : SituationType::NONE;
        }
        const DetectionMetrics m = score_detection(preds, gt);
        const auto [tp, fp, tn, fn] = oracle(preds, gt);
        ASSERT_EQ(m.tp, tp);
        ASSERT_EQ(m.fp, fp);
        ASSERT_EQ(m.tn, tn);
        ASSERT_EQ(m.fn, fn);
    }
    announce(8, "scorer == naive loop (exhaustive N<=8, random N<=20)");
}

TEST(Acceptance, C09_DeterministicRuns) {
    const ProfileRun second = execute_profile("gemini20", "repeat");
    const ProfileRun& first = profile_run("gemini20");

    std::map<std::string, std::string> tree_a, tree_b;
    for (const auto& [tree, root] :
         {std::pair<std::map<std::string, std::string>*, fs::path>{&tree_a,
                                                                   first.out_dir},
          {&tree_b, second.out_dir}})
        for (const auto& entry : fs::recursive_directory_iterator(root))
            if (entry.is_regular_file())
                (*tree)[fs::relative(entry.path(), root).string()] =
                    read_file(entry.path().string());
    EXPECT_EQ(tree_a.size(), tree_b.size());
    EXPECT_EQ(tree_a, tree_b);
    announce(9, "two replay runs are byte-identical");
}

TEST(Acceptance, C10_PrimitiveCodecInversion) {
    std::mt19937_64 rng(0xacce97aa);
    const std::pair<std::int64_t, std::int64_t> classes[] = {
        {0, 1},   {0, 7},      {1, 13},           {0, 255},
        {1, 255}, {0, 65535},  {-100000, 800001}, {0, 4398046511103LL},
        {7, 7},   {-900000000, 900000001},
    };
    for (const auto& [lb, ub] : classes) {
        std::uniform_int_distribution<std::int64_t> dist(lb, ub);
        for (int i = 0; i < 1000; ++i) {
            const std::int64_t value = dist(rng);
            BitSink sink;
            write_constrained_int(sink, value, lb, ub);
            BitSource src(sink.payload().octets);
            ASSERT_EQ(read_constrained_int(src, lb, ub), value);
        }
    }
    // sized bit strings over the lane range
    for (int i = 0; i < 1000; ++i) {
        const std::size_t len = 1 + rng() % 13;
        LaneBits bits(static_cast<std::uint16_t>(rng()), len);
        BitSink sink;
        write_sized_bitstring(sink, bits, 1, 13);
        BitSource src(sink.payload().octets);
        ASSERT_EQ(read_sized_bitstring(src, 1, 13), bits);
    }
    // non-power-of-two rejection: 4-bit offset 15 over range size 13
    BitSource bad(std::vector<std::uint8_t>{0xF0});
    try {
        read_constrained_int(bad, 1, 13);
        FAIL() << "expected DecodedOutOfRange";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::decoded_out_of_range);
    }
    announce(10, "primitive read/write inversion incl. 1..13 rejection");
}
