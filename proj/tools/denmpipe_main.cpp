// denmpipe: camera frames in, schema-valid DENM messages and their UPER
// payloads out, plus codec utilities, evaluation and request statistics.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "denmpipe/agents/pipeline.hpp"
#include "denmpipe/config.hpp"
#include "denmpipe/denm/cause_registry.hpp"
#include "denmpipe/denm/json.hpp"
#include "denmpipe/denm/validate.hpp"
#include "denmpipe/eval/ground_truth.hpp"
#include "denmpipe/eval/metrics.hpp"
#include "denmpipe/eval/predictions.hpp"
#include "denmpipe/eval/report.hpp"
#include "denmpipe/providers/http.hpp"
#include "denmpipe/providers/replay.hpp"
#include "denmpipe/telemetry/aggregate.hpp"
#include "denmpipe/telemetry/log.hpp"
#include "denmpipe/uper/codec.hpp"
#include "denmpipe/uper/hex.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

using namespace denmpipe;

nlohmann::json report_json(const ValidationReport& report) {
    nlohmann::json violations = nlohmann::json::array();
    for (const Violation& v : report.violations)
        violations.push_back(
            {{"path", v.path}, {"rule", v.rule}, {"message", v.message}});
    return {{"valid", report.valid}, {"violations", violations}};
}

const CauseRegistry* load_registry(const std::string& path,
                                   std::optional<CauseRegistry>& storage) {
    if (path.empty()) return nullptr;
    storage = CauseRegistry::from_file(path);
    return &*storage;
}

int cmd_encode(const std::string& json_path, const std::string& out_path) {
    const Denm denm = read_denm_json_file(json_path);
    try {
        const UperPayload payload = encode_denm(denm);
        write_uper_file(out_path, payload);
        std::cout << payload_to_hex(payload) << "\n";
    } catch (const InvalidMessageError& e) {
        std::cerr << report_json(e.report()).dump(2) << "\n";
        return kExitValidation;
    }
    return kExitOk;
}

int cmd_decode(const std::string& uper_path) {
    const UperPayload payload = read_uper_file(uper_path);
    const Denm denm = decode_denm(payload);
    std::cout << to_json(denm).dump(2) << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& json_path, bool lenient,
                 const std::string& registry_path) {
    std::optional<CauseRegistry> registry_storage;
    const CauseRegistry* registry = load_registry(registry_path, registry_storage);
    ValidationReport report;
    try {
        const Denm denm = read_denm_json_file(json_path);
        report = validate_denm(denm, !lenient, registry);
    } catch (const Error& e) {
        report.add("(document)", errc_name(e.code()), e.message());
    }
    std::cout << report_json(report).dump(2) << "\n";
    return report.valid ? kExitOk : kExitValidation;
}

int cmd_eval(const std::string& pred_dir, const std::string& gt_path,
             const std::string& out_dir, const std::string& registry_path) {
    std::optional<CauseRegistry> registry_storage;
    const CauseRegistry* registry = load_registry(registry_path, registry_storage);

    const auto gt = load_ground_truth(gt_path);
    const LoadedPredictions preds = load_predictions(pred_dir);
    const DetectionMetrics det = score_detection(preds.detection, gt);
    const FieldMetrics fields = score_fields(preds.fields, gt);
    const SchemaMetrics schema = score_schema(pred_dir, registry);

    const std::string text = render_report(det, fields, schema, ReportFormat::text);
    std::filesystem::create_directories(out_dir);
    std::ofstream(out_dir + "/report.txt", std::ios::binary) << text;
    std::ofstream(out_dir + "/report.json", std::ios::binary)
        << render_report(det, fields, schema, ReportFormat::json);
    std::cout << text;
    if (!schema.failures.empty()) {
        std::cerr << "schema failures:\n";
        for (const auto& f : schema.failures) std::cerr << "  " << f << "\n";
    }
    return kExitOk;
}

int cmd_stats(const std::string& log_path, const std::string& model,
              bool as_json) {
    const auto records = read_telemetry_log(log_path);
    std::vector<AggregateStats> rows;
    if (!model.empty()) {
        rows.push_back(aggregate(records, model));
    } else {
        for (const std::string& id : model_ids_in(records))
            rows.push_back(aggregate(records, id));
        if (rows.empty())
            throw Error(Errc::empty_log, "telemetry log has no records");
    }
    if (as_json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) arr.push_back(to_json(r));
        std::cout << arr.dump(2) << "\n";
    } else {
        std::cout << render_stats_table(rows);
    }
    return kExitOk;
}

int cmd_run(RunConfig config) {
    validate_run_config(config);

    std::unique_ptr<ModelProvider> model;
    if (config.provider == "replay")
        model = std::make_unique<ReplayProvider>(
            ReplayBundle::load(config.replay_bundle));
    else
        model = std::make_unique<HttpModelProvider>(config.endpoint);

    std::unique_ptr<DepthProvider> depth;
    if (!config.depth_dir.empty()) {
        depth = std::make_unique<FileDepthProvider>(config.depth_dir);
    } else {
        EndpointConfig depth_endpoint;
        depth_endpoint.url = config.depth_url;
        depth_endpoint.timeout_ms = config.depth_timeout_ms;
        depth = std::make_unique<HttpDepthProvider>(depth_endpoint);
    }

    std::optional<CauseRegistry> registry_storage;
    const CauseRegistry* registry =
        load_registry(config.registry_file, registry_storage);

    PipelineContext ctx;
    ctx.model = model.get();
    ctx.depth = depth.get();
    ctx.prompts = PromptSet::load(config.prompts);
    ctx.cameras = load_camera_config(config.cameras);
    ctx.build_options = config.build_options;
    ctx.extract_options.strict_ranges = config.strict_ranges;
    ctx.registry = registry;
    if (config.fixed_clock)
        ctx.clock = [t = *config.fixed_clock] { return t; };
    else
        ctx.clock = [] { return its_now_ms(); };
    ctx.output_dir = config.output_dir;

    std::filesystem::create_directories(config.output_dir);
    const auto manifest = load_manifest(config.manifest);
    TelemetryLog log(config.telemetry);
    const BatchResult result = run_batch(manifest, ctx, log, config.max_in_flight);

    std::cout << "processed " << manifest.size() << " image(s): "
              << result.succeeded << " ok, " << result.failed << " failed\n";
    if (!manifest.empty() && result.failed == manifest.size()) {
        std::cerr << "every image failed; see " << config.output_dir
                  << "/errors.jsonl\n";
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"road-situation DENM pipeline and codec utilities"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run the pipeline over a manifest");
    std::string run_config_path;
    std::map<std::string, std::string> run_overrides;
    run->add_option("--config", run_config_path, "flat key=value config file");
    auto add_override = [&](const char* flag, const char* key, const char* help) {
        run->add_option_function<std::string>(
            flag,
            [&run_overrides, key](const std::string& v) { run_overrides[key] = v; },
            help);
    };
    add_override("--manifest", "manifest", "JSONL manifest of images");
    add_override("--cameras", "cameras", "camera config JSON");
    add_override("--prompts", "prompts", "prompt template directory");
    add_override("--out", "out", "output directory");
    add_override("--telemetry", "telemetry", "telemetry log path");
    add_override("--provider", "provider", "replay | http");
    add_override("--replay-bundle", "replay_bundle", "replay bundle directory");
    add_override("--endpoint-url", "endpoint_url", "model endpoint URL");
    add_override("--model-id", "model_id", "model identifier");
    add_override("--auth-env", "auth_env", "env var holding the bearer token");
    add_override("--timeout-ms", "timeout_ms", "model request timeout");
    add_override("--depth-dir", "depth_dir", "depth grid directory");
    add_override("--depth-url", "depth_url", "depth endpoint URL");
    add_override("--registry", "registry", "cause registry JSON");
    add_override("--lane-status-polarity", "lane_status_polarity",
                 "zero_closed | one_closed");
    add_override("--max-in-flight", "max_in_flight", "concurrent images");
    add_override("--fixed-clock", "fixed_clock",
                 "fixed ITS timestamp (ms) for deterministic runs");
    add_override("--strict-ranges", "strict_ranges",
                 "fail instead of clamping out-of-range model fields");

    // encode / decode / validate
    auto* encode = app.add_subcommand("encode", "message JSON -> UPER hex file");
    std::string encode_json, encode_out;
    encode->add_option("--json", encode_json, "message JSON file")->required();
    encode->add_option("--out", encode_out, "output .uper file")->required();

    auto* decode = app.add_subcommand("decode", "UPER hex file -> message JSON");
    std::string decode_uper;
    decode->add_option("--uper", decode_uper, ".uper file")->required();

    auto* validate = app.add_subcommand("validate", "check a message JSON file");
    std::string validate_json, validate_registry;
    bool validate_lenient = false;
    validate->add_option("--json", validate_json, "message JSON file")->required();
    validate->add_flag("--lenient", validate_lenient,
                       "skip registry and container-dependency checks");
    validate->add_option("--registry", validate_registry, "cause registry JSON");

    // eval / stats
    auto* eval = app.add_subcommand("eval", "score pipeline outputs against GT");
    std::string eval_pred, eval_gt, eval_out, eval_registry;
    eval->add_option("--pred", eval_pred, "pipeline output directory")->required();
    eval->add_option("--gt", eval_gt, "ground truth CSV")->required();
    eval->add_option("--out", eval_out, "report output directory")->required();
    eval->add_option("--registry", eval_registry, "cause registry JSON");

    auto* stats = app.add_subcommand("stats", "aggregate a telemetry log");
    std::string stats_log, stats_model;
    bool stats_json = false;
    stats->add_option("--log", stats_log, "telemetry JSONL file")->required();
    stats->add_option("--model", stats_model, "restrict to one model id");
    stats->add_flag("--json", stats_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (run->parsed()) {
            RunConfig config;
            if (!run_config_path.empty())
                apply_config_pairs(
                    config, parse_flat_config(run_config_path),
                    std::filesystem::path(run_config_path).parent_path().string());
            apply_config_pairs(config, run_overrides,
                               std::filesystem::current_path().string());
            return cmd_run(std::move(config));
        }
        if (encode->parsed()) return cmd_encode(encode_json, encode_out);
        if (decode->parsed()) return cmd_decode(decode_uper);
        if (validate->parsed())
            return cmd_validate(validate_json, validate_lenient, validate_registry);
        if (eval->parsed()) return cmd_eval(eval_pred, eval_gt, eval_out,
                                            eval_registry);
        if (stats->parsed()) return cmd_stats(stats_log, stats_model, stats_json);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == Errc::bad_config ? kExitUsage : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
