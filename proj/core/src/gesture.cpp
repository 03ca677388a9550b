#include "cogs/gesture.hpp"

#include <json.hpp>

namespace cogs {

using nlohmann::json;

namespace {

JointPose parse_joint(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("pos") || !j.contains("rot"))
        throw SchemaError(where + ": expected {\"pos\":[x,y,z],\"rot\":[x,y,z,w]}");
    const auto& p = j["pos"];
    const auto& r = j["rot"];
    if (!p.is_array() || p.size() != 3 || !r.is_array() || r.size() != 4)
        throw SchemaError(where + ": bad pos/rot arity");
    JointPose out;
    out.position = {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
    if (!finite(out.position)) throw SchemaError(where + ": non-finite position");
    out.rotation =
        Quat{r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()}
            .normalized();
    return out;
}

HandPose parse_hand(const json& j, const std::string& where) {
    static const char* joints[] = {"palm", "thumb_tip", "index_tip", "middle_tip",
                                   "index_metacarpal"};
    HandPose hp;
    JointPose* slots[] = {&hp.palm, &hp.thumb_tip, &hp.index_tip, &hp.middle_tip,
                          &hp.index_metacarpal};
    for (int i = 0; i < 5; ++i) {
        if (!j.contains(joints[i]))
            throw SchemaError(where + ": present hand is missing joint '" +
                              joints[i] + "'");
        *slots[i] = parse_joint(j[joints[i]], where + "." + joints[i]);
    }
    return hp;
}

json joint_to_json(const JointPose& jp) {
    return json{{"pos", {jp.position.x, jp.position.y, jp.position.z}},
                {"rot", {jp.rotation.x, jp.rotation.y, jp.rotation.z, jp.rotation.w}}};
}

json hand_to_json(const HandPose& hp) {
    return json{{"palm", joint_to_json(hp.palm)},
                {"thumb_tip", joint_to_json(hp.thumb_tip)},
                {"index_tip", joint_to_json(hp.index_tip)},
                {"middle_tip", joint_to_json(hp.middle_tip)},
                {"index_metacarpal", joint_to_json(hp.index_metacarpal)}};
}

}  // namespace

GestureTrace load_trace(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("trace: invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("frames") || !doc["frames"].is_array())
        throw SchemaError("trace: expected {\"frames\": [...]}");

    GestureTrace trace;
    for (const auto& jf : doc["frames"]) {
        if (!jf.is_object() || !jf.contains("t_ms") || !jf["t_ms"].is_number_integer())
            throw SchemaError("trace frame: missing t_ms");
        HandFrame f;
        f.t_ms = jf["t_ms"].get<int64_t>();
        if (!trace.frames.empty() && f.t_ms <= trace.frames.back().t_ms)
            throw NonMonotonicTime("trace: t_ms must be strictly increasing");
        std::string where = "frame@" + std::to_string(f.t_ms);
        if (jf.contains("left")) f.left = parse_hand(jf["left"], where + ".left");
        if (jf.contains("right")) f.right = parse_hand(jf["right"], where + ".right");
        trace.frames.push_back(std::move(f));
    }
    return trace;
}

std::string serialize_trace(const GestureTrace& trace) {
    json frames = json::array();
    for (const auto& f : trace.frames) {
        json jf{{"t_ms", f.t_ms}};
        if (f.left) jf["left"] = hand_to_json(*f.left);
        if (f.right) jf["right"] = hand_to_json(*f.right);
        frames.push_back(std::move(jf));
    }
    return json{{"frames", frames}}.dump(1);
}

GestureSegment segment(const GestureTrace& trace, const TimeInterval& interval) {
    GestureSegment seg;
    seg.interval = interval;
    for (const auto& f : trace.frames)
        if (f.t_ms >= interval.start_ms && f.t_ms <= interval.end_ms)
            seg.frames.push_back(f);
    if (seg.frames.empty())
        throw EmptySegment("no gesture frames in [" + std::to_string(interval.start_ms) +
                           ", " + std::to_string(interval.end_ms) + "] ms");
    return seg;
}

namespace {

bool hand_moved(const GestureSegment& seg, Hand h, double threshold_m) {
    const Vec3* ref = nullptr;
    Vec3 first;
    double max_disp = 0.0;
    for (const auto& f : seg.frames) {
        const auto& hp = f.hand(h);
        if (!hp) continue;
        if (!ref) {
            first = hp->palm.position;
            ref = &first;
            continue;
        }
        max_disp = std::max(max_disp, distance(hp->palm.position, first));
    }
    return max_disp > threshold_m;
}

size_t frames_present(const GestureSegment& seg, Hand h) {
    size_t n = 0;
    for (const auto& f : seg.frames)
        if (f.hand(h)) ++n;
    return n;
}

}  // namespace

Movement detect_movement(const GestureSegment& seg, double threshold_m) {
    return {hand_moved(seg, Hand::Left, threshold_m),
            hand_moved(seg, Hand::Right, threshold_m)};
}

HandsUsed hands_used(const GestureSegment& seg, double move_threshold_m) {
    size_t nl = frames_present(seg, Hand::Left);
    size_t nr = frames_present(seg, Hand::Right);
    if (nl == 0 && nr == 0) throw NoHands("segment contains no hand data");
    if (nl == 0) return HandsUsed::RightOnly;
    if (nr == 0) return HandsUsed::LeftOnly;

    Movement mv = detect_movement(seg, move_threshold_m);
    if (mv.left && mv.right) return HandsUsed::Both;
    if (mv.left) return HandsUsed::LeftOnly;
    if (mv.right) return HandsUsed::RightOnly;
    // Neither hand moved: a static two-hand pose needs both hands the
    // whole time, otherwise take the steadier hand.
    size_t total = seg.frames.size();
    if (nl == total && nr == total) return HandsUsed::Both;
    return nl >= nr ? HandsUsed::LeftOnly : HandsUsed::RightOnly;
}

Hand dominant_hand(const GestureSegment& seg) {
    size_t nl = frames_present(seg, Hand::Left);
    size_t nr = frames_present(seg, Hand::Right);
    if (nl == 0 && nr == 0) throw NoHands("segment contains no hand data");
    if (nl == 0) return Hand::Right;
    if (nr == 0) return Hand::Left;

    auto travel = [&](Hand h) {
        double total = 0.0;
        const Vec3* prev = nullptr;
        Vec3 prev_v;
        for (const auto& f : seg.frames) {
            const auto& hp = f.hand(h);
            if (!hp) continue;
            if (prev) total += distance(hp->index_tip.position, prev_v);
            prev_v = hp->index_tip.position;
            prev = &prev_v;
        }
        return total;
    };
    return travel(Hand::Left) > travel(Hand::Right) ? Hand::Left : Hand::Right;
}

}  // namespace cogs
