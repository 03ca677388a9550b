#include "cogs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace cogs {

namespace fs = std::filesystem;
using nlohmann::json;

double angle_between_deg(const Vec3& a, const Vec3& b) {
    return rad_to_deg(std::atan2(norm(cross(a, b)), dot(a, b)));
}

namespace {

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

/// Seeded RNG with explicit distributions so fixtures are byte-identical
/// across standard libraries, not just across runs.
struct Rng {
    std::mt19937_64 eng;

    explicit Rng(uint64_t seed) : eng(seed) {}

    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double gauss() {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    Vec3 unit_vec() {
        for (;;) {
            Vec3 v{gauss(), gauss(), gauss()};
            if (norm(v) > 1e-6) return normalized(v);
        }
    }
};

/// Rotates `dir` by |N(0,1)|*sigma degrees about a random perpendicular axis.
Vec3 jitter_direction(const Vec3& dir, double sigma_deg, Rng& rng) {
    if (sigma_deg <= 0.0) return dir;
    Vec3 axis;
    for (;;) {
        axis = cross(dir, rng.unit_vec());
        if (norm(axis) > 1e-6) break;
    }
    double angle = std::abs(rng.gauss()) * deg_to_rad(sigma_deg);
    return Quat::from_axis_angle(axis, angle).rotate(dir);
}

Vec3 jitter_position(const Vec3& p, double sigma_m, Rng& rng) {
    if (sigma_m <= 0.0) return p;
    return p + Vec3{rng.gauss(), rng.gauss(), rng.gauss()} * sigma_m;
}

WordSpan word(const char* text, int64_t start, int64_t end) {
    return {text, start, end};
}

SceneObject make_box(const std::string& name, const Vec3& pos, const Vec3& scale,
                     std::optional<Rgb> color = std::nullopt, bool manipulatable = true) {
    SceneObject obj;
    obj.name = name;
    obj.position = {round3(pos.x), round3(pos.y), round3(pos.z)};
    obj.scale = {round3(scale.x), round3(scale.y), round3(scale.z)};
    obj.color = color;
    obj.manipulatable = manipulatable;
    return obj;
}

/// A right-hand pose pointing along `dir` with the ray anchored at
/// `metacarpal`; spread fingers (no pinch).
HandPose pointing_hand(const Vec3& metacarpal, const Vec3& dir, const Vec3& palm) {
    HandPose h;
    h.index_metacarpal.position = metacarpal;
    h.index_tip.position = metacarpal + dir * 0.08;
    h.palm.position = palm;
    h.thumb_tip.position = palm + Vec3{0.03, -0.02, 0.01};
    h.middle_tip.position = h.index_tip.position + Vec3{0, 0.05, 0};
    return h;
}

std::vector<int64_t> frame_times(int64_t start, int64_t end, int64_t step) {
    std::vector<int64_t> out;
    for (int64_t t = start; t <= end; t += step) out.push_back(t);
    return out;
}

Fixture synth_position(const SynthParams& p, Rng& rng) {
    Fixture fx;
    double wall_z = p.target_distance_m;
    fx.scene.objects.push_back(make_box("wall", {0, 1, wall_z + 0.05}, {4, 3, 0.1},
                                        color_from_name("gray"), false));
    fx.scene.objects.push_back(
        make_box("cube", {-0.8, 0.2, 0.4}, {0.1, 0.1, 0.1}, color_from_name("navy")));

    Vec3 target{round3(rng.uniform(-0.3, 0.3)), round3(rng.uniform(0.8, 1.2)), wall_z};
    fx.truth.position = target;
    fx.truth.target_name = "cube";

    fx.transcript.utterance_id = "position";
    fx.transcript.words = {word("Move", 0, 200), word("the", 220, 350),
                           word("cube", 370, 650), word("here", 900, 1500)};

    Vec3 metacarpal{0.05, 1.0, 0.0};
    for (int64_t t : frame_times(900, 1500, 8)) {
        Vec3 dir = jitter_direction(normalized(target - metacarpal), p.noise_deg, rng);
        HandFrame f;
        f.t_ms = t;
        f.right = pointing_hand(metacarpal,
                                dir, jitter_position(metacarpal + Vec3{0, -0.02, 0},
                                                     p.palm_noise_m, rng));
        fx.trace.frames.push_back(std::move(f));
    }
    return fx;
}

Fixture synth_direction(const SynthParams& p, Rng& rng) {
    Fixture fx;
    fx.scene.objects.push_back(
        make_box("cube", {0, 1, 0.6}, {0.1, 0.1, 0.1}, color_from_name("teal")));

    Vec3 d = rng.unit_vec();
    fx.truth.direction = d;
    fx.truth.target_name = "cube";

    fx.transcript.utterance_id = "direction";
    fx.transcript.words = {word("Turn", 0, 200), word("the", 220, 350),
                           word("cube", 370, 650), word("this", 900, 1200),
                           word("way", 1220, 1500)};

    Vec3 metacarpal{0.05, 1.0, 0.1};
    for (int64_t t : frame_times(900, 1500, 8)) {
        Vec3 dir = jitter_direction(d, p.noise_deg, rng);
        HandFrame f;
        f.t_ms = t;
        f.right = pointing_hand(metacarpal, dir,
                                jitter_position(metacarpal + Vec3{0, -0.02, 0},
                                                p.palm_noise_m, rng));
        fx.trace.frames.push_back(std::move(f));
    }
    return fx;
}

HandPose resting_hand(const Vec3& palm, const Quat& rotation = Quat::identity()) {
    HandPose h;
    h.palm.position = palm;
    h.palm.rotation = rotation;
    h.thumb_tip.position = palm + Vec3{0.04, 0.01, 0.02};
    h.index_tip.position = palm + Vec3{0.02, 0.02, 0.08};
    h.middle_tip.position = palm + Vec3{0.0, 0.025, 0.085};
    h.index_metacarpal.position = palm + Vec3{0.01, 0.01, 0.03};
    return h;
}

Fixture synth_rotation(const SynthParams& p, Rng& rng) {
    Fixture fx;
    fx.scene.objects.push_back(
        make_box("cube", {0, 1, 0.6}, {0.1, 0.1, 0.1}, color_from_name("olive")));
    fx.truth.target_name = "cube";

    fx.transcript.utterance_id = "rotation";
    fx.transcript.words = {word("Rotate", 0, 250), word("the", 270, 400),
                           word("cube", 420, 700), word("like", 900, 1200),
                           word("this", 1220, 1500)};

    Quat delta = Quat::from_axis_angle(rng.unit_vec(),
                                       deg_to_rad(rng.uniform(20.0, 160.0)));
    auto times = frame_times(900, 1500, 8);
    std::string variant = p.variant.empty() ? "one" : p.variant;

    if (variant == "two") {
        Vec3 center{0, 1.0, 0.4};
        Vec3 u0 = rng.unit_vec();
        for (size_t k = 0; k < times.size(); ++k) {
            double s = static_cast<double>(k) / (times.size() - 1);
            Vec3 u = normalized(slerp(Quat::identity(), delta, s).rotate(u0));
            HandFrame f;
            f.t_ms = times[k];
            f.left = resting_hand(jitter_position(center - u * 0.15, p.palm_noise_m, rng));
            f.right = resting_hand(jitter_position(center + u * 0.15, p.palm_noise_m, rng));
            fx.trace.frames.push_back(std::move(f));
        }
        // The extractor reports the minimal arc between the first and last
        // inter-palm lines, not the raw delta (they differ by any twist
        // about the line); score against the same construction.
        Vec3 line0 = fx.trace.frames.front().right->palm.position -
                     fx.trace.frames.front().left->palm.position;
        Vec3 line1 = fx.trace.frames.back().right->palm.position -
                     fx.trace.frames.back().left->palm.position;
        fx.truth.rotation = rotation_between(line0, line1);
    } else {
        Vec3 palm{0.2, 1.0, 0.3};
        for (size_t k = 0; k < times.size(); ++k) {
            double s = static_cast<double>(k) / (times.size() - 1);
            HandFrame f;
            f.t_ms = times[k];
            f.right = resting_hand(jitter_position(palm, p.palm_noise_m, rng),
                                   slerp(Quat::identity(), delta, s));
            fx.trace.frames.push_back(std::move(f));
        }
        fx.truth.rotation = delta;
    }
    return fx;
}

Fixture synth_size(const SynthParams& p, Rng& rng) {
    Fixture fx;
    std::string variant = p.variant.empty() ? "pinch" : p.variant;
    double s = round3(rng.uniform(0.1, 0.4));
    fx.truth.size = s;
    fx.truth.target_name = "cube";

    fx.transcript.utterance_id = "size";
    fx.transcript.words = {word("Enlarge", 0, 250), word("the", 270, 400),
                           word("cube", 420, 700),  word("to", 720, 850),
                           word("this", 900, 1200), word("large", 1220, 1500)};

    if (variant == "surface") {
        fx.scene.objects.push_back(make_box("table", {0, 0.75, 0.5}, {1.2, 0.1, 0.8},
                                            color_from_name("maroon"), false));
        fx.scene.objects.push_back(
            make_box("cube", {-0.4, 0.85, 0.5}, {0.1, 0.1, 0.1}, color_from_name("lime")));
    } else {
        fx.scene.objects.push_back(
            make_box("cube", {0, 1, 0.6}, {0.1, 0.1, 0.1}, color_from_name("lime")));
    }

    for (int64_t t : frame_times(900, 1500, 8)) {
        HandFrame f;
        f.t_ms = t;
        if (variant == "two_hand") {
            f.left = resting_hand(Vec3{-s / 2, 1.0, 0.4});
            f.right = resting_hand(Vec3{s / 2, 1.0, 0.4});
        } else if (variant == "surface") {
            // Flat hand hovering over the tabletop, palm facing down;
            // index and middle merged to request the surface reference.
            Vec3 palm{0.3, 0.8 + s, 0.5};
            HandPose h;
            h.palm.position = palm;
            h.index_tip.position = palm + Vec3{0.05, -0.02, 0.0};
            h.middle_tip.position = palm + Vec3{0.06, -0.02, 0.0};
            h.thumb_tip.position = palm + Vec3{0.08, 0.0, 0.0};
            h.index_metacarpal.position = palm + Vec3{0.02, 0.0, 0.02};
            f.right = h;
        } else {  // pinch
            Vec3 palm{0.2, 1.0, 0.3};
            HandPose h;
            h.palm.position = palm;
            h.thumb_tip.position = palm + Vec3{-s / 2, 0.0, 0.05};
            h.index_tip.position = h.thumb_tip.position + Vec3{s, 0.0, 0.0};
            h.middle_tip.position = h.index_tip.position + Vec3{0.0, 0.06, 0.0};
            h.index_metacarpal.position = palm + Vec3{0.02, 0.0, 0.02};
            f.right = h;
        }
        fx.trace.frames.push_back(std::move(f));
    }
    return fx;
}

Fixture synth_path(const SynthParams& p, Rng& rng) {
    Fixture fx;
    fx.scene.objects.push_back(
        make_box("cube", {-0.5, 1, 0.5}, {0.1, 0.1, 0.1}, color_from_name("aqua")));
    fx.truth.target_name = "cube";

    fx.transcript.utterance_id = "path";
    fx.transcript.words = {word("Move", 0, 200),     word("the", 220, 350),
                           word("cube", 370, 650),   word("along", 670, 850),
                           word("like", 900, 1200),  word("this", 1210, 1540)};

    std::string variant = p.variant.empty() ? "line" : p.variant;
    const size_t n = 64;
    std::vector<Vec3> tips;
    for (size_t k = 0; k < n; ++k) {
        double s = static_cast<double>(k) / (n - 1);
        Vec3 pt;
        if (variant == "circle") {
            double a = 2.0 * kPi * static_cast<double>(k) / n;  // open loop
            pt = Vec3{0.15 * std::cos(a), 1.0 + 0.15 * std::sin(a), 0.5};
        } else if (variant == "sine") {
            // The session target: 30 cm long, 20 cm amplitude, period 1.5.
            double u = 0.3 * s;
            pt = Vec3{u - 0.15, 1.0 + 0.2 * std::sin(2.0 * kPi * u / 1.5), 0.5};
        } else {
            pt = Vec3{-0.15, 0.9, 0.5} + Vec3{0.3, 0.2, 0.0} * s;
        }
        tips.push_back(jitter_position(pt, p.palm_noise_m, rng));
    }
    fx.truth.path = resample_polyline(tips, n);

    auto times = frame_times(900, 1530, 10);
    for (size_t k = 0; k < n; ++k) {
        HandFrame f;
        f.t_ms = times[k];
        HandPose h;
        h.index_tip.position = tips[k];
        h.palm.position = tips[k] + Vec3{0.0, -0.05, 0.0};
        h.thumb_tip.position = tips[k] + Vec3{0.03, -0.03, 0.0};
        h.middle_tip.position = tips[k] + Vec3{0.0, 0.06, 0.02};
        h.index_metacarpal.position = tips[k] - Vec3{0.02, 0.0, 0.02};
        f.right = h;
        fx.trace.frames.push_back(std::move(f));
    }
    return fx;
}

Fixture synth_object(const SynthParams& p, Rng& rng) {
    Fixture fx;
    fx.transcript.utterance_id = "object";
    fx.transcript.words = {word("Select", 0, 250),  word("the", 270, 400),
                           word("red", 420, 700),   word("ones", 720, 850),
                           word("from", 870, 1000), word("these", 1100, 1700)};

    Vec3 palm{0.1, 1.0, 0.1};
    Vec3 grid_center{0, 1.0, 2.1};
    Vec3 axis = normalized(grid_center - palm);
    double r = 0.05;

    // 9 red, 8 green, 8 blue over a 5x5 board of cubes.
    std::vector<std::string> colors;
    for (int i = 0; i < 9; ++i) colors.push_back("red");
    for (int i = 0; i < 8; ++i) colors.push_back("green");
    for (int i = 0; i < 8; ++i) colors.push_back("blue");
    for (size_t i = colors.size() - 1; i > 0; --i)
        std::swap(colors[i], colors[static_cast<size_t>(rng.uniform() * (i + 1))]);

    ExtractionConfig ext;
    Cone cone{palm - axis * ext.cone_vertex_offset_m, axis, palm, r, ext.cone_height_m};

    // Layouts where a cube sits within 1 mm of the cone boundary are
    // re-rolled so the selection is stable under fixture round-tripping.
    for (int attempt = 0; attempt < 50; ++attempt) {
        double ox = round3(rng.uniform(-0.03, 0.03));
        double oy = round3(rng.uniform(-0.03, 0.03));
        Scene scene;
        int idx = 0;
        for (int j = 0; j < 5; ++j) {
            for (int i = 0; i < 5; ++i, ++idx) {
                char name[16];
                std::snprintf(name, sizeof name, "cube_%02d", idx + 1);
                Vec3 pos{(i - 2) * 0.12 + ox, 1.0 + (j - 2) * 0.12 + oy, 2.1};
                scene.objects.push_back(make_box(name, pos, {0.04, 0.04, 0.04},
                                                 color_from_name(colors[idx])));
            }
        }
        Cone lo = cone, hi = cone;
        lo.base_radius = r - 0.001;
        hi.base_radius = r + 0.001;
        if (cone_intersect(scene, lo) != cone_intersect(scene, hi)) continue;

        std::vector<std::string> truth;
        for (const auto& name : cone_intersect(scene, cone))
            if (scene.find(name)->color == std::optional<Rgb>(color_from_name("red")))
                truth.push_back(name);
        if (truth.empty()) continue;

        fx.scene = std::move(scene);
        fx.truth.selection = std::move(truth);
        break;
    }
    if (fx.scene.empty())
        throw DegenerateInput("object task: no stable cube layout for this seed");

    // Index tips ride the base circle of the intended cone; every per-frame
    // ray direction is exactly the axis.
    Vec3 u = std::abs(axis.x) < 0.9 ? normalized(cross(axis, Vec3{1, 0, 0}))
                                    : normalized(cross(axis, Vec3{0, 1, 0}));
    Vec3 v = cross(axis, u);
    auto times = frame_times(1100, 1700, 8);
    for (size_t k = 0; k < times.size(); ++k) {
        double a = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(times.size());
        Vec3 tip = palm + (u * std::cos(a) + v * std::sin(a)) * r;
        tip = jitter_position(tip, p.palm_noise_m, rng);
        HandFrame f;
        f.t_ms = times[k];
        HandPose h;
        h.palm.position = palm;
        h.index_tip.position = tip;
        h.index_metacarpal.position = tip - axis * 0.08;
        h.thumb_tip.position = palm + Vec3{0.03, -0.02, 0.01};
        h.middle_tip.position = tip + Vec3{0, 0.05, 0};
        f.right = h;
        fx.trace.frames.push_back(std::move(f));
    }
    return fx;
}

}  // namespace

Fixture synth_fixture(const SynthParams& params) {
    Rng rng(params.seed * 0x9E3779B97F4A7C15ull + std::hash<std::string>{}(params.task));
    Fixture fx;
    if (params.task == "position") fx = synth_position(params, rng);
    else if (params.task == "object") fx = synth_object(params, rng);
    else if (params.task == "direction") fx = synth_direction(params, rng);
    else if (params.task == "rotation") fx = synth_rotation(params, rng);
    else if (params.task == "size") fx = synth_size(params, rng);
    else if (params.task == "path") fx = synth_path(params, rng);
    else throw SchemaError("unknown synth task '" + params.task + "'");
    fx.truth.task = params.task;
    return fx;
}

namespace {

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from(const json& j) {
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot write " + path.string());
    out << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::string serialize_transcript(const Transcript& t) {
    json words = json::array();
    for (const auto& w : t.words)
        words.push_back({{"text", w.text}, {"start_ms", w.start_ms}, {"end_ms", w.end_ms}});
    return json{{"utterance_id", t.utterance_id}, {"words", words}}.dump(1);
}

std::string serialize_truth(const GroundTruth& truth) {
    json j{{"task", truth.task}};
    if (!truth.target_name.empty()) j["target_name"] = truth.target_name;
    if (truth.position) j["position"] = vec3_json(*truth.position);
    if (truth.direction) j["direction"] = vec3_json(*truth.direction);
    if (truth.rotation)
        j["rotation"] = json::array(
            {truth.rotation->x, truth.rotation->y, truth.rotation->z, truth.rotation->w});
    if (truth.size) j["size"] = *truth.size;
    if (!truth.selection.empty()) j["selection"] = truth.selection;
    if (!truth.path.empty()) {
        json pts = json::array();
        for (const auto& p : truth.path) pts.push_back(vec3_json(p));
        j["path"] = pts;
    }
    return j.dump(1);
}

GroundTruth parse_truth(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("truth: invalid JSON: ") + e.what());
    }
    GroundTruth out;
    if (!j.is_object() || !j.contains("task"))
        throw SchemaError("truth: expected {\"task\": ...}");
    out.task = j["task"].get<std::string>();
    if (j.contains("target_name")) out.target_name = j["target_name"].get<std::string>();
    if (j.contains("position")) out.position = vec3_from(j["position"]);
    if (j.contains("direction")) out.direction = vec3_from(j["direction"]);
    if (j.contains("rotation")) {
        const auto& r = j["rotation"];
        out.rotation = Quat{r[0].get<double>(), r[1].get<double>(), r[2].get<double>(),
                            r[3].get<double>()};
    }
    if (j.contains("size")) out.size = j["size"].get<double>();
    if (j.contains("selection"))
        out.selection = j["selection"].get<std::vector<std::string>>();
    if (j.contains("path"))
        for (const auto& p : j["path"]) out.path.push_back(vec3_from(p));
    return out;
}

void write_fixture(const Fixture& fx, const std::string& dir, const std::string& stem) {
    fs::create_directories(dir);
    fs::path base = fs::path(dir) / stem;
    write_file(base.string() + ".scene.json", serialize_scene(fx.scene));
    write_file(base.string() + ".transcript.json", serialize_transcript(fx.transcript));
    write_file(base.string() + ".trace.json", serialize_trace(fx.trace));
    write_file(base.string() + ".truth.json", serialize_truth(fx.truth));
}

Fixture read_fixture(const std::string& dir, const std::string& stem) {
    fs::path base = fs::path(dir) / stem;
    Fixture fx;
    fx.scene = load_scene(read_file(base.string() + ".scene.json"));
    fx.transcript = parse_transcript(read_file(base.string() + ".transcript.json"));
    fx.trace = load_trace(read_file(base.string() + ".trace.json"));
    fx.truth = parse_truth(read_file(base.string() + ".truth.json"));
    return fx;
}

std::vector<std::string> fixture_stems(const std::string& dir) {
    std::vector<std::string> out;
    const std::string suffix = ".truth.json";
    if (!fs::is_directory(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.size() <= suffix.size() ||
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0)
            continue;
        std::string stem = name.substr(0, name.size() - suffix.size());
        fs::path base = fs::path(dir) / stem;
        if (fs::exists(base.string() + ".scene.json") &&
            fs::exists(base.string() + ".transcript.json") &&
            fs::exists(base.string() + ".trace.json"))
            out.push_back(stem);
    }
    std::sort(out.begin(), out.end());
    return out;
}

TrialMetrics evaluate_fixture(const Fixture& fx, const PipelineConfig& config) {
    TrialMetrics tm;
    const GroundTruth& truth = fx.truth;

    Resolution res;
    try {
        Plan plan = plan_rules(fx.transcript, fx.scene, config.catalog);
        res = resolve(plan, fx.transcript, fx.trace, fx.scene, config);
    } catch (const Error& e) {
        tm.error = e.what();
        return tm;
    }
    if (std::holds_alternative<ClarificationRequest>(res)) {
        tm.error = std::get<ClarificationRequest>(res).message;
        return tm;
    }
    const ExecutedResult& ex = std::get<ExecutedResult>(res);

    auto need_target = [&]() -> const SceneObject& {
        const SceneObject* obj = ex.scene.find(truth.target_name);
        if (!obj)
            throw MissingGroundTruth("truth names no target object for task '" +
                                     truth.task + "'");
        return *obj;
    };

    if (truth.task == "position") {
        if (!truth.position) throw MissingGroundTruth("position task without target position");
        tm.values.emplace_back("position_error_m",
                               metric_position_error(need_target().position, *truth.position));
    } else if (truth.task == "direction") {
        if (!truth.direction) throw MissingGroundTruth("direction task without target direction");
        tm.values.emplace_back("direction_error_deg",
                               angle_between_deg(need_target().forward(), *truth.direction));
    } else if (truth.task == "rotation") {
        if (!truth.rotation) throw MissingGroundTruth("rotation task without target rotation");
        tm.values.emplace_back("rotation_error_deg",
                               metric_rotation_diff(need_target().rotation, *truth.rotation));
    } else if (truth.task == "size") {
        if (!truth.size) throw MissingGroundTruth("size task without target size");
        const Vec3& s = need_target().scale;
        double extent = std::max({s.x, s.y, s.z});
        auto pct = metric_size_pct(extent, *truth.size);
        if (!pct) throw MissingGroundTruth("size task with zero target size");
        tm.values.emplace_back("size_error_pct", *pct);
    } else if (truth.task == "path") {
        if (truth.path.empty()) throw MissingGroundTruth("path task without target path");
        const SceneObject& obj = need_target();
        if (!obj.path) {
            tm.error = "no path attached to '" + truth.target_name + "'";
            return tm;
        }
        tm.values.emplace_back("path_similarity_pct",
                               metric_path(obj.path->waypoints, truth.path));
    } else if (truth.task == "object") {
        if (truth.selection.empty())
            throw MissingGroundTruth("object task without target selection");
        const std::vector<std::string>* selected = nullptr;
        for (const auto& call : ex.calls)
            if (call.selected) selected = &*call.selected;
        if (!selected) {
            tm.error = "plan executed no select call";
            return tm;
        }
        PrecisionRecall pr = metric_selection(*selected, truth.selection);
        if (!pr.precision || !pr.recall) {
            tm.error = "selection metric undefined (empty set)";
            return tm;
        }
        tm.values.emplace_back("precision_pct", *pr.precision);
        tm.values.emplace_back("recall_pct", *pr.recall);
    } else {
        throw MissingGroundTruth("unknown task '" + truth.task + "' in ground truth");
    }
    tm.ok = true;
    return tm;
}

EvalSummary evaluate_task(const std::string& task, const std::vector<Fixture>& fixtures,
                          const PipelineConfig& config) {
    EvalSummary summary;
    summary.task = task;
    for (const auto& fx : fixtures) {
        if (fx.truth.task != task)
            throw MissingGroundTruth("fixture task '" + fx.truth.task +
                                     "' does not match requested task '" + task + "'");
        summary.trials.push_back(evaluate_fixture(fx, config));
    }

    std::vector<std::string> metric_order;
    for (const auto& t : summary.trials)
        for (const auto& [name, _] : t.values)
            if (std::find(metric_order.begin(), metric_order.end(), name) ==
                metric_order.end())
                metric_order.push_back(name);

    for (const auto& metric : metric_order) {
        std::vector<double> vals;
        for (const auto& t : summary.trials)
            for (const auto& [name, v] : t.values)
                if (name == metric) vals.push_back(v);
        EvalRow row;
        row.metric = metric;
        row.n = vals.size();
        for (double v : vals) row.mean += v;
        row.mean /= static_cast<double>(vals.size());
        if (vals.size() > 1) {
            double ss = 0.0;
            for (double v : vals) ss += (v - row.mean) * (v - row.mean);
            row.sd = std::sqrt(ss / static_cast<double>(vals.size() - 1));
        }
        summary.rows.push_back(row);
    }
    return summary;
}

std::string format_eval_table(const EvalSummary& summary) {
    size_t ok = 0;
    for (const auto& t : summary.trials)
        if (t.ok) ++ok;
    std::ostringstream out;
    out << "task: " << summary.task << "  trials: " << summary.trials.size()
        << "  ok: " << ok << "\n";
    char line[128];
    std::snprintf(line, sizeof line, "%-22s %5s %14s %14s\n", "metric", "n", "mean", "sd");
    out << line;
    for (const auto& row : summary.rows) {
        std::snprintf(line, sizeof line, "%-22s %5zu %14.6f %14.6f\n", row.metric.c_str(),
                      row.n, row.mean, row.sd);
        out << line;
    }
    for (const auto& t : summary.trials)
        if (!t.ok) out << "failed: " << t.stem << ": " << t.error << "\n";
    return out.str();
}

}  // namespace cogs
