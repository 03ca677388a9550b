#include <doctest.h>

#include <sstream>

#include "cogs/pipeline.hpp"

using namespace cogs;

namespace {

Transcript say(const std::string& sentence) {
    Transcript t;
    std::istringstream in(sentence);
    std::string w;
    int64_t ms = 0;
    while (in >> w) {
        t.words.push_back({w, ms, ms + 250});
        ms += 300;
    }
    return t;
}

HandPose pointing_pose(Vec3 metacarpal, Vec3 dir) {
    HandPose hp;
    Vec3 d = normalized(dir);
    hp.index_metacarpal.position = metacarpal;
    hp.index_tip.position = metacarpal + d * 0.08;
    hp.palm.position = metacarpal - d * 0.02;
    hp.thumb_tip.position = hp.palm.position + Vec3{0.04, 0, 0};
    hp.middle_tip.position = hp.index_tip.position + Vec3{0.05, 0, 0};
    return hp;
}

/// Right-hand pointing frames from `origin` toward `target` over [t0, t1].
GestureTrace pointing_trace(Vec3 origin, Vec3 target, int64_t t0, int64_t t1) {
    GestureTrace trace;
    for (int64_t ms = t0; ms <= t1; ms += 16) {
        HandFrame f;
        f.t_ms = ms;
        f.right = pointing_pose(origin, target - origin);
        trace.frames.push_back(f);
    }
    return trace;
}

SceneObject box(const std::string& name, Vec3 pos, Vec3 scale,
                std::optional<Rgb> color = std::nullopt) {
    SceneObject o;
    o.name = name;
    o.position = pos;
    o.scale = scale;
    o.color = color;
    return o;
}

Scene wall_and_cube() {
    Scene s;
    SceneObject wall = box("wall", {0, 1.5, 3.05}, {6, 3, 0.1});
    wall.manipulatable = false;
    s.objects.push_back(wall);
    s.objects.push_back(box("cube", {0.8, 1, 1}, {0.2, 0.2, 0.2}));
    return s;
}

PlannedCall planned_move_here() {
    // "move the cube here": object textual, position at word 3.
    PlannedCall pc;
    pc.function = "move";
    pc.text_params["object"] = std::string("cube");
    pc.amb_params.push_back({"position", ParamKind::Position, {3, 3}, {}});
    return pc;
}

}  // namespace

TEST_CASE("a fully resolved plan executes against the gesture trace") {
    Scene s = wall_and_cube();
    Transcript t = say("move the cube here");
    // "here" spans [900, 1150]; padded window [600, 1450]. All rays point
    // at (0.4, 1.6, 3.0), so the first hit is the wall front at z = 3.0.
    GestureTrace trace = pointing_trace({0.05, 1, 0}, {0.4, 1.6, 3.0}, 700, 1400);

    Plan plan;
    plan.calls.push_back(planned_move_here());
    Resolution r = resolve(plan, t, trace, s);
    REQUIRE(std::holds_alternative<ExecutedResult>(r));
    const auto& ex = std::get<ExecutedResult>(r);
    CHECK(distance(ex.scene.find("cube")->position, {0.4, 1.6, 3.0}) < 1e-9);

    REQUIRE(ex.calls.size() == 1);
    const CallReport& report = ex.calls[0];
    CHECK(report.function == "move");
    REQUIRE(report.params.size() == 2);
    CHECK(report.params[0].from_text);
    CHECK(report.params[1].resolved);
    REQUIRE(report.params[1].window.has_value());
    CHECK(report.params[1].window->start_ms == 600);
    CHECK(report.params[1].window->end_ms == 1450);
}

TEST_CASE("a missing gesture leaves the scene untouched and asks to repeat") {
    Scene s = wall_and_cube();
    Transcript t = say("move the cube here");
    // All frames end long before the "here" window opens at 600 ms.
    GestureTrace trace = pointing_trace({0.05, 1, 0}, {0.4, 1.6, 3.0}, 0, 400);

    Plan plan;
    plan.calls.push_back(planned_move_here());
    Resolution r = resolve(plan, t, trace, s);
    REQUIRE(std::holds_alternative<ClarificationRequest>(r));
    const auto& req = std::get<ClarificationRequest>(r);
    CHECK(req.function == "move");
    CHECK(req.signature_display == "move(object, position)");
    CHECK(req.missing == std::vector<std::string>{"position"});
    CHECK(req.message ==
          "Unable to retrieve 'position' parameter for function "
          "move(object, position). The 'object' parameter was detected as "
          "the cube. Could you repeat your command?");
}

TEST_CASE("clarification_message golden strings") {
    FunctionCatalog cat = FunctionCatalog::default_catalog();
    const FunctionSignature& mv = *cat.find("move");
    CHECK(clarification_message(mv, {}, {"object", "position"}) ==
          "Unable to retrieve 'object', 'position' parameters for function "
          "move(object, position). Could you repeat your command?");
    CHECK(clarification_message(mv, {{"position", "(0.400, 1.600, 3.000)"}},
                                {"object"}) ==
          "Unable to retrieve 'object' parameter for function "
          "move(object, position). The 'position' parameter was detected as "
          "(0.400, 1.600, 3.000). Could you repeat your command?");
}

TEST_CASE("an utterance is atomic: one unresolvable call blocks all of them") {
    Scene s = wall_and_cube();
    Transcript t = say("move the cube here then rotate the cube like this");
    GestureTrace trace = pointing_trace({0.05, 1, 0}, {0.4, 1.6, 3.0}, 700, 1400);

    Plan plan;
    plan.calls.push_back(planned_move_here());
    PlannedCall rot;
    rot.function = "rotate";
    rot.text_params["object"] = std::string("cube");
    // "like this" spans words 8..9 -> [2400, 2950] padded [2100, 3250]:
    // no frames there, so the rotation cannot be extracted.
    rot.amb_params.push_back({"rotation", ParamKind::RotationDelta, {8, 9}, {}});
    plan.calls.push_back(rot);

    std::string before = serialize_scene(s);
    Resolution r = resolve(plan, t, trace, s);
    REQUIRE(std::holds_alternative<ClarificationRequest>(r));
    const auto& req = std::get<ClarificationRequest>(r);
    CHECK(req.function == "rotate");
    CHECK(req.missing == std::vector<std::string>{"rotation"});
    // Byte-identical scene: the resolvable first call did not run either.
    CHECK(serialize_scene(s) == before);
    // The report still covers both calls.
    CHECK(req.calls.size() == 2);
    CHECK(req.calls[0].params[1].resolved);
}

TEST_CASE("a select result binds later pronoun object slots") {
    Scene s;
    s.objects.push_back(box("a", {-0.12, 1, 2}, {0.05, 0.05, 0.05}, Rgb{1, 0, 0}));
    s.objects.push_back(box("b", {0, 1, 2}, {0.05, 0.05, 0.05}, Rgb{0, 0, 1}));
    s.objects.push_back(box("c", {0.12, 1, 2}, {0.05, 0.05, 0.05}, Rgb{1, 0, 0}));

    Transcript t = say("select the red ones from these then paint them yellow");
    // "these" is word 5 -> window [1200, 2050]. The fingertip circles the
    // whole row, so the fitted selection cone covers all three boxes.
    GestureTrace trace;
    int step = 0;
    for (int64_t ms = 1250; ms <= 2000; ms += 16, ++step) {
        double a = 2 * kPi * step / 47.0;
        Vec3 tip{0.02 * std::cos(a), 1 + 0.02 * std::sin(a), 0.1};
        HandPose hp;
        hp.index_tip.position = tip;
        hp.index_metacarpal.position = tip - Vec3{0, 0, 0.08};
        hp.palm.position = tip - Vec3{0, 0, 0.1};
        hp.thumb_tip.position = hp.palm.position + Vec3{0.04, 0, 0};
        hp.middle_tip.position = tip + Vec3{0.05, 0, 0};
        HandFrame f;
        f.t_ms = ms;
        f.right = hp;
        trace.frames.push_back(f);
    }

    Plan plan;
    PlannedCall sel;
    sel.function = "select";
    sel.text_params["color"] = std::string("red");
    sel.amb_params.push_back({"objects", ParamKind::ObjectList, {5, 5}, {}});
    plan.calls.push_back(sel);
    PlannedCall paint;
    paint.function = "set_color";
    paint.text_params["color"] = std::string("yellow");
    paint.amb_params.push_back({"object", ParamKind::Object, {8, 8}, {}});
    plan.calls.push_back(paint);

    Resolution r = resolve(plan, t, trace, s);
    REQUIRE(std::holds_alternative<ExecutedResult>(r));
    const auto& ex = std::get<ExecutedResult>(r);
    REQUIRE(ex.calls[0].selected.has_value());
    CHECK(*ex.calls[0].selected == std::vector<std::string>{"a", "c"});
    CHECK(*ex.scene.find("a")->color == Rgb{1, 1, 0});
    CHECK(*ex.scene.find("b")->color == Rgb{0, 0, 1});  // not selected
    CHECK(*ex.scene.find("c")->color == Rgb{1, 1, 0});
}

TEST_CASE("an ambiguous object slot with several cone hits takes the axis-nearest") {
    Scene s;
    s.objects.push_back(box("center", {0.4, 1.2, 2}, {0.06, 0.06, 0.06}));
    s.objects.push_back(box("fringe", {0.55, 1.2, 2}, {0.3, 0.3, 0.3}));

    Transcript t = say("move this here");
    Plan plan;
    PlannedCall pc;
    pc.function = "move";
    pc.amb_params.push_back({"object", ParamKind::Object, {1, 1}, {}});
    pc.text_params["position"] = Vec3{0, 0.5, 1};
    plan.calls.push_back(pc);

    GestureTrace trace = pointing_trace({0.02, 1, 0}, {0.4, 1.2, 2}, 100, 700);
    Resolution r = resolve(plan, t, trace, s);
    REQUIRE(std::holds_alternative<ExecutedResult>(r));
    const auto& ex = std::get<ExecutedResult>(r);
    CHECK(distance(ex.scene.find("center")->position, {0, 0.5, 1}) < 1e-12);
    CHECK(ex.scene.find("fringe")->position == Vec3{0.55, 1.2, 2});
}

TEST_CASE("color and shape slots can never come from a gesture") {
    Scene s = wall_and_cube();
    Transcript t = say("paint the cube like so");
    GestureTrace trace = pointing_trace({0.05, 1, 0}, {0.4, 1.6, 3.0}, 100, 1400);

    Plan plan;
    PlannedCall pc;
    pc.function = "set_color";
    pc.text_params["object"] = std::string("cube");
    pc.amb_params.push_back({"color", ParamKind::Color, {3, 4}, {}});
    plan.calls.push_back(pc);

    Resolution r = resolve(plan, t, trace, s);
    REQUIRE(std::holds_alternative<ClarificationRequest>(r));
    CHECK(std::get<ClarificationRequest>(r).missing ==
          std::vector<std::string>{"color"});
}

TEST_CASE("position extraction honors the planner's ignore list") {
    Scene s = wall_and_cube();
    // A screen hovers between the hand and the wall; pointing through it
    // while ignoring it must land on the wall.
    s.objects.push_back(box("screen", {0.2, 1.3, 1.5}, {2, 2, 0.02}));

    Transcript t = say("move the cube behind the screen here");
    GestureTrace trace = pointing_trace({0.05, 1, 0}, {0.4, 1.6, 3.0}, 1700, 2300);
    Plan plan;
    PlannedCall pc;
    pc.function = "move";
    pc.text_params["object"] = std::string("cube");
    pc.amb_params.push_back({"position", ParamKind::Position, {6, 6}, {"screen"}});
    plan.calls.push_back(pc);

    Resolution r = resolve(plan, t, trace, s);
    REQUIRE(std::holds_alternative<ExecutedResult>(r));
    CHECK(distance(std::get<ExecutedResult>(r).scene.find("cube")->position,
                   {0.4, 1.6, 3.0}) < 1e-9);
}

TEST_CASE("evaluation metrics") {
    CHECK(metric_position_error({1, 2, 3}, {1, 2, 3.5}) == doctest::Approx(0.5));

    Quat a = Quat::from_axis_angle({0, 1, 0}, deg_to_rad(10));
    Quat b = Quat::from_axis_angle({0, 1, 0}, deg_to_rad(25));
    CHECK(metric_rotation_diff(a, b) == doctest::Approx(15.0).epsilon(1e-12));
    // Tiny angles keep full precision (no acos flooring).
    Quat c = Quat::from_axis_angle({1, 0, 0}, 1e-9);
    CHECK(metric_rotation_diff(Quat::identity(), c) ==
          doctest::Approx(rad_to_deg(1e-9)).epsilon(1e-9));

    CHECK(*metric_size_pct(0.25, 0.2) == doctest::Approx(25.0));
    CHECK_FALSE(metric_size_pct(0.25, 0.0).has_value());

    PrecisionRecall pr = metric_selection({"a", "b", "x"}, {"a", "b", "c"});
    CHECK(*pr.precision == doctest::Approx(100.0 * 2 / 3));
    CHECK(*pr.recall == doctest::Approx(100.0 * 2 / 3));
    pr = metric_selection({}, {"a"});
    CHECK_FALSE(pr.precision.has_value());
    CHECK(*pr.recall == 0.0);
    pr = metric_selection({"a"}, {});
    CHECK(*pr.precision == 0.0);
    CHECK_FALSE(pr.recall.has_value());

    std::vector<Vec3> line = {{0, 0, 0}, {1, 0, 0}};
    CHECK(metric_path(line, line) == doctest::Approx(100.0));
}
