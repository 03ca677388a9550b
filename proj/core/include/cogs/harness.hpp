#ifndef COGS_HARNESS_HPP
#define COGS_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cogs/pipeline.hpp"

namespace cogs {

/// Synthetic-trial generator knobs. Tasks: position, object, direction,
/// rotation, size, path.
struct SynthParams {
    std::string task;
    uint64_t seed = 0;
    double noise_deg = 0.0;     // per-frame pointing jitter (sigma, degrees)
    double palm_noise_m = 0.0;  // per-frame palm position jitter (sigma, m)
    /// rotation: "one" | "two" (hands); size: "pinch" | "two_hand" |
    /// "surface"; path: "line" | "circle" | "sine". Empty = task default.
    std::string variant;
    double target_distance_m = 2.0;  // pointing tasks
};

/// What the generator knows; evaluation compares pipeline output to this.
struct GroundTruth {
    std::string task;
    std::string target_name;  // the manipulated object; empty for select
    std::optional<Vec3> position;
    std::optional<Vec3> direction;
    std::optional<Quat> rotation;
    std::optional<double> size;
    std::vector<std::string> selection;
    std::vector<Vec3> path;
};

struct Fixture {
    Scene scene;
    Transcript transcript;
    GestureTrace trace;
    GroundTruth truth;
};

/// Deterministic by params: same SynthParams, byte-identical fixture files.
Fixture synth_fixture(const SynthParams& params);

/// <dir>/<stem>.scene.json, .transcript.json, .trace.json, .truth.json
void write_fixture(const Fixture& fx, const std::string& dir, const std::string& stem);
Fixture read_fixture(const std::string& dir, const std::string& stem);
/// Stems with all four fixture files present, sorted.
std::vector<std::string> fixture_stems(const std::string& dir);

std::string serialize_transcript(const Transcript& t);
std::string serialize_truth(const GroundTruth& truth);
GroundTruth parse_truth(const std::string& json_text);

struct TrialMetrics {
    std::string stem;
    bool ok = false;
    std::string error;  // clarification or failure text when !ok
    std::vector<std::pair<std::string, double>> values;  // metric -> value
};

struct EvalRow {
    std::string metric;
    size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
};

struct EvalSummary {
    std::string task;
    std::vector<TrialMetrics> trials;
    std::vector<EvalRow> rows;
};

/// Runs the full pipeline (rule planner) on one fixture and scores it
/// against its ground truth. Throws MissingGroundTruth when the truth
/// lacks the field the task needs.
TrialMetrics evaluate_fixture(const Fixture& fx, const PipelineConfig& config = {});

EvalSummary evaluate_task(const std::string& task, const std::vector<Fixture>& fixtures,
                          const PipelineConfig& config = {});

/// mean +/- sd per metric, fixed-width text table.
std::string format_eval_table(const EvalSummary& summary);

/// Angle between two directions in degrees, exact near zero (atan2 form).
double angle_between_deg(const Vec3& a, const Vec3& b);

}  // namespace cogs

#endif
