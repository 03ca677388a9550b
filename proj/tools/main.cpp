#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cogs/harness.hpp"
#include "cogs/intent.hpp"
#include "cogs/pipeline.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cogs::SchemaError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cogs::SchemaError("cannot write " + path);
    out << text;
}

void emit(const json& record) { std::cout << record.dump() << "\n"; }

json param_record(const cogs::ParamReport& p) {
    json j{{"type", "param"},
           {"name", p.name},
           {"kind", cogs::to_string(p.kind)},
           {"from_text", p.from_text},
           {"resolved", p.resolved}};
    if (p.resolved) j["value"] = p.value_text;
    if (p.window) j["window_ms"] = {p.window->start_ms, p.window->end_ms};
    if (!p.error.empty()) j["error"] = p.error;
    return j;
}

int cmd_replay(const std::string& scene_file, const std::string& transcript_file,
               const std::string& trace_file, const std::string& backend,
               const std::string& out_file, int64_t padding_ms, double move_threshold_m) {
    cogs::Scene scene = cogs::load_scene(read_file(scene_file));
    cogs::Transcript transcript = cogs::parse_transcript(read_file(transcript_file));
    cogs::GestureTrace trace = cogs::load_trace(read_file(trace_file));

    cogs::PipelineConfig config;
    config.padding_ms = padding_ms;
    config.extraction.move_threshold_m = move_threshold_m;

    cogs::Plan plan;
    if (backend == "llm") {
        plan = cogs::plan_llm(transcript, scene, config.catalog,
                              cogs::IntentBackendConfig::from_environment());
    } else {
        plan = cogs::plan_rules(transcript, scene, config.catalog);
    }
    for (const auto& call : plan.calls) {
        json amb = json::array();
        for (const auto& a : call.amb_params)
            amb.push_back({{"name", a.name},
                           {"kind", cogs::to_string(a.kind)},
                           {"token", {a.token.first, a.token.last}},
                           {"ignore_objects", a.ignore_objects}});
        emit({{"type", "plan"}, {"function", call.function}, {"amb_params", amb}});
    }

    cogs::Resolution res = cogs::resolve(plan, transcript, trace, scene, config);

    if (std::holds_alternative<cogs::ExecutedResult>(res)) {
        const auto& ex = std::get<cogs::ExecutedResult>(res);
        for (const auto& call : ex.calls) {
            emit({{"type", "call"}, {"function", call.function}});
            for (const auto& p : call.params) emit(param_record(p));
            if (call.selected)
                emit({{"type", "selection"}, {"objects", *call.selected}});
        }
        if (!out_file.empty()) write_file(out_file, cogs::serialize_scene(ex.scene));
        emit({{"type", "result"}, {"status", "executed"}});
        return 0;
    }

    const auto& req = std::get<cogs::ClarificationRequest>(res);
    for (const auto& call : req.calls) {
        emit({{"type", "call"}, {"function", call.function}});
        for (const auto& p : call.params) emit(param_record(p));
    }
    if (!out_file.empty()) write_file(out_file, cogs::serialize_scene(scene));
    emit({{"type", "result"},
          {"status", "clarification"},
          {"function", req.function},
          {"missing", req.missing},
          {"message", req.message}});
    return 2;
}

int cmd_eval(const std::string& task, const std::string& dir, int64_t padding_ms) {
    cogs::PipelineConfig config;
    config.padding_ms = padding_ms;

    std::vector<cogs::Fixture> fixtures;
    std::vector<std::string> stems;
    for (const auto& stem : cogs::fixture_stems(dir)) {
        cogs::Fixture fx = cogs::read_fixture(dir, stem);
        if (fx.truth.task != task) continue;
        fixtures.push_back(std::move(fx));
        stems.push_back(stem);
    }
    if (fixtures.empty())
        throw cogs::MissingGroundTruth("no '" + task + "' fixtures under " + dir);

    cogs::EvalSummary summary = cogs::evaluate_task(task, fixtures, config);
    for (size_t i = 0; i < summary.trials.size(); ++i) {
        auto& t = summary.trials[i];
        t.stem = stems[i];
        json j{{"type", "trial"}, {"stem", t.stem}, {"ok", t.ok}};
        for (const auto& [name, v] : t.values) j[name] = v;
        if (!t.error.empty()) j["error"] = t.error;
        emit(j);
    }
    std::cout << cogs::format_eval_table(summary);
    return 0;
}

int cmd_synth(const std::string& task, uint64_t seed, int count, const std::string& out_dir,
              double noise_deg, double palm_noise_m, const std::string& variant,
              double distance_m) {
    for (int i = 0; i < count; ++i) {
        cogs::SynthParams params;
        params.task = task;
        params.seed = seed + static_cast<uint64_t>(i);
        params.noise_deg = noise_deg;
        params.palm_noise_m = palm_noise_m;
        params.variant = variant;
        params.target_distance_m = distance_m;
        cogs::Fixture fx = cogs::synth_fixture(params);
        std::string stem = task + "_" + std::to_string(params.seed);
        cogs::write_fixture(fx, out_dir, stem);
        emit({{"type", "fixture"}, {"stem", stem}, {"dir", out_dir}});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Replay, evaluation, and fixture-synthesis harness for the "
                 "co-speech gesture command engine"};
    app.require_subcommand(1);

    auto* replay = app.add_subcommand("replay", "Run one recorded session end to end");
    std::string scene_file, transcript_file, trace_file, out_file;
    std::string backend = "rules";
    int64_t padding_ms = 300;
    double move_threshold_m = 0.02;
    replay->add_option("--scene", scene_file, "Scene JSON file")->required();
    replay->add_option("--transcript", transcript_file, "Transcript JSON file")->required();
    replay->add_option("--trace", trace_file, "Gesture trace JSON file")->required();
    replay->add_option("--backend", backend, "Planner backend: rules|llm")
        ->check(CLI::IsMember({"rules", "llm"}));
    replay->add_option("--out", out_file, "Where to write the final scene JSON");
    replay->add_option("--padding-ms", padding_ms, "Token window padding (ms)");
    replay->add_option("--move-threshold-m", move_threshold_m,
                       "Palm movement threshold (m)");

    auto* eval = app.add_subcommand("eval", "Score fixtures against their ground truth");
    std::string task, dir;
    eval->add_option("--task", task, "position|object|direction|rotation|size|path")
        ->required()
        ->check(CLI::IsMember({"position", "object", "direction", "rotation", "size", "path"}));
    eval->add_option("--dir", dir, "Fixture directory")->required();
    eval->add_option("--padding-ms", padding_ms, "Token window padding (ms)");

    auto* synth = app.add_subcommand("synth", "Generate synthetic fixtures");
    uint64_t seed = 0;
    int count = 1;
    std::string out_dir = ".", variant;
    double noise_deg = 0.0, palm_noise_m = 0.0, distance_m = 2.0;
    synth->add_option("--task", task, "position|object|direction|rotation|size|path")
        ->required()
        ->check(CLI::IsMember({"position", "object", "direction", "rotation", "size", "path"}));
    synth->add_option("--seed", seed, "Base seed; trial i uses seed+i");
    synth->add_option("--count", count, "Number of fixtures");
    synth->add_option("--out-dir", out_dir, "Output directory");
    synth->add_option("--noise-deg", noise_deg, "Pointing jitter sigma (degrees)");
    synth->add_option("--palm-noise-m", palm_noise_m, "Palm jitter sigma (m)");
    synth->add_option("--variant", variant,
                      "rotation: one|two; size: pinch|two_hand|surface; "
                      "path: line|circle|sine");
    synth->add_option("--distance-m", distance_m, "Pointing target distance (m)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (replay->parsed())
            return cmd_replay(scene_file, transcript_file, trace_file, backend, out_file,
                              padding_ms, move_threshold_m);
        if (eval->parsed()) return cmd_eval(task, dir, padding_ms);
        if (synth->parsed())
            return cmd_synth(task, seed, count, out_dir, noise_deg, palm_noise_m, variant,
                             distance_m);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
