#include "cogs/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace cogs {

namespace {

std::string lower(const std::string& s) {
    std::string out;
    for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string strip_punct(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::ispunct(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::ispunct(static_cast<unsigned char>(s[b - 1]))) --b;
    return lower(s.substr(a, b - a));
}

bool is_select_pronoun(const std::string& w) {
    return w == "them" || w == "these" || w == "those";
}

/// True when the token span is just a pronoun referring back to a select
/// result ("color them blue").
bool refers_to_selection(const Transcript& t, const TokenSpan& span) {
    for (size_t i = span.first; i <= span.last; ++i) {
        std::string w = strip_punct(t.words[i].text);
        if (w == "the" || w == "of") continue;
        if (!is_select_pronoun(w)) return false;
    }
    return true;
}

std::string format_vec3(const Vec3& v) {
    return "(" + format_3dp(v.x) + ", " + format_3dp(v.y) + ", " + format_3dp(v.z) + ")";
}

std::string value_display(ParamKind kind, const Value& v) {
    if (std::holds_alternative<std::string>(v)) {
        const std::string& s = std::get<std::string>(v);
        return kind == ParamKind::Object ? "the " + s : s;
    }
    if (std::holds_alternative<double>(v)) return format_3dp(std::get<double>(v)) + " m";
    if (std::holds_alternative<Vec3>(v)) return format_vec3(std::get<Vec3>(v));
    if (std::holds_alternative<Quat>(v)) {
        double deg = rad_to_deg(std::get<Quat>(v).angle_rad());
        return "a rotation of " + format_3dp(deg) + " degrees";
    }
    if (std::holds_alternative<Path>(v)) {
        return "a path of " + std::to_string(std::get<Path>(v).polyline.size()) + " points";
    }
    if (std::holds_alternative<ObjectSet>(v)) {
        const auto& names = std::get<ObjectSet>(v).names;
        if (names.empty()) return "no objects";
        std::string out;
        for (size_t i = 0; i < names.size(); ++i) {
            if (i) out += ", ";
            out += "the " + names[i];
        }
        return out;
    }
    return "?";
}

struct PendingCall {
    FunctionCall fc;
    CallReport report;
    std::vector<std::string> missing;  // signature order
    std::vector<std::pair<std::string, std::string>> resolved;
    // Object/ObjectList slots bound to an earlier select's result set.
    std::vector<std::string> selection_refs;
};

/// Among several cone hits, the one whose center is most aligned with the
/// cone axis.
std::string closest_to_axis(const std::vector<std::string>& names, const Scene& scene,
                            const Cone& cone) {
    std::string best = names.front();
    double best_angle = 1e18;
    for (const auto& name : names) {
        const SceneObject* obj = scene.find(name);
        if (!obj) continue;
        Vec3 to = obj->position - cone.vertex;
        double n = norm(to);
        if (n < 1e-12) return name;
        double c = std::clamp(dot(to, cone.axis) / n, -1.0, 1.0);
        double angle = std::acos(c);
        if (angle < best_angle) {
            best_angle = angle;
            best = name;
        }
    }
    return best;
}

}  // namespace

std::string clarification_message(
    const FunctionSignature& sig,
    const std::vector<std::pair<std::string, std::string>>& resolved,
    const std::vector<std::string>& missing) {
    std::ostringstream out;
    out << "Unable to retrieve ";
    for (size_t i = 0; i < missing.size(); ++i) {
        if (i) out << ", ";
        out << "'" << missing[i] << "'";
    }
    out << (missing.size() == 1 ? " parameter" : " parameters") << " for function "
        << sig.display() << ".";
    for (const auto& [name, value] : resolved)
        out << " The '" << name << "' parameter was detected as " << value << ".";
    out << " Could you repeat your command?";
    return out.str();
}

Resolution resolve(const Plan& plan, const Transcript& t, const GestureTrace& trace,
                   const Scene& scene, const PipelineConfig& config) {
    std::vector<PendingCall> pending;
    bool select_seen = false;

    for (const auto& planned : plan.calls) {
        const FunctionSignature* sig = config.catalog.find(planned.function);
        if (!sig) throw UnknownFunction(general_error_message(config.catalog));

        PendingCall pc;
        pc.fc.function = planned.function;
        pc.fc.params = planned.text_params;
        pc.report.function = planned.function;

        for (const auto& spec : sig->params) {
            ParamReport pr;
            pr.name = spec.name;
            pr.kind = spec.kind;

            auto text_it = planned.text_params.find(spec.name);
            if (text_it != planned.text_params.end()) {
                pr.from_text = true;
                pr.resolved = true;
                pr.value_text = value_display(spec.kind, text_it->second);
                pc.resolved.emplace_back(spec.name, pr.value_text);
                pc.report.params.push_back(std::move(pr));
                continue;
            }

            auto amb_it = std::find_if(
                planned.amb_params.begin(), planned.amb_params.end(),
                [&](const AmbiguousParam& a) { return a.name == spec.name; });
            if (amb_it == planned.amb_params.end()) {
                pc.missing.push_back(spec.name);
                pr.error = "parameter not planned";
                pc.report.params.push_back(std::move(pr));
                continue;
            }
            const AmbiguousParam& amb = *amb_it;

            TimeInterval window = token_window(t, amb.token, config.padding_ms);
            pr.window = window;

            if ((amb.kind == ParamKind::Object || amb.kind == ParamKind::ObjectList) &&
                select_seen && refers_to_selection(t, amb.token)) {
                pc.selection_refs.push_back(spec.name);
                pr.resolved = true;
                pr.value_text = "the selected objects";
                pc.resolved.emplace_back(spec.name, pr.value_text);
                pc.report.params.push_back(std::move(pr));
                continue;
            }

            try {
                GestureSegment seg = segment(trace, window);
                Value value;
                switch (amb.kind) {
                    case ParamKind::Position:
                        value = extract_position(seg, scene, amb.ignore_objects,
                                                 config.extraction);
                        break;
                    case ParamKind::Object: {
                        auto names = extract_object(seg, scene, config.extraction);
                        if (names.empty())
                            throw NoIntersection("selection cone hit no objects");
                        value = names.size() == 1
                                    ? names.front()
                                    : closest_to_axis(names, scene,
                                                      build_cone(seg, config.extraction));
                        break;
                    }
                    case ParamKind::ObjectList: {
                        auto names = extract_object(seg, scene, config.extraction);
                        if (names.empty())
                            throw NoIntersection("selection cone hit no objects");
                        value = ObjectSet{std::move(names)};
                        break;
                    }
                    case ParamKind::Direction:
                        value = extract_direction(seg, config.extraction);
                        break;
                    case ParamKind::RotationDelta:
                        value = extract_rotation(seg, config.extraction);
                        break;
                    case ParamKind::Size:
                        value = extract_size(seg, scene, config.extraction);
                        break;
                    case ParamKind::Path: {
                        Path p = extract_path(seg, config.extraction);
                        if (planned.function == "move_path" && p.polyline.size() < 2)
                            throw EmptyPath("path gesture has no extent");
                        value = std::move(p);
                        break;
                    }
                    case ParamKind::Color:
                    case ParamKind::ShapeType:
                        throw DegenerateInput("'" + spec.name +
                                              "' cannot be derived from a gesture");
                }
                pr.resolved = true;
                pr.value_text = value_display(amb.kind, value);
                pc.resolved.emplace_back(spec.name, pr.value_text);
                pc.fc.params[spec.name] = std::move(value);
            } catch (const Error& e) {
                pr.error = e.what();
                pc.missing.push_back(spec.name);
            }
            pc.report.params.push_back(std::move(pr));
        }

        if (planned.function == "select") select_seen = true;
        pending.push_back(std::move(pc));
    }

    // Atomic utterance: nothing executes unless every call is complete.
    for (const auto& pc : pending) {
        if (pc.missing.empty()) continue;
        ClarificationRequest req;
        req.function = pc.fc.function;
        const FunctionSignature* sig = config.catalog.find(pc.fc.function);
        req.signature_display = sig->display();
        req.missing = pc.missing;
        req.resolved = pc.resolved;
        req.message = clarification_message(*sig, pc.resolved, pc.missing);
        for (const auto& p : pending) req.calls.push_back(p.report);
        return req;
    }

    ExecutedResult result;
    result.scene = scene;
    std::vector<std::string> last_selection;
    for (auto& pc : pending) {
        for (const auto& name : pc.selection_refs)
            pc.fc.params[name] = ObjectSet{last_selection};
        ExecResult step = execute_call(result.scene, pc.fc, config.catalog);
        result.scene = std::move(step.scene);
        if (step.selected) {
            last_selection = *step.selected;
            pc.report.selected = std::move(step.selected);
        }
        result.calls.push_back(std::move(pc.report));
    }
    return result;
}

double metric_position_error(const Vec3& p, const Vec3& target) {
    return distance(p, target);
}

double metric_rotation_diff(const Quat& a, const Quat& b) {
    // Geodesic angle 2*acos(|<a,b>|), computed in atan2 form so small
    // angles keep full precision.
    Quat d = a.conjugate() * b;
    double s = std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
    return rad_to_deg(2.0 * std::atan2(s, std::abs(d.w)));
}

std::optional<double> metric_size_pct(double length, double target) {
    if (target == 0.0) return std::nullopt;
    return 100.0 * std::abs(length - target) / std::abs(target);
}

PrecisionRecall metric_selection(const std::vector<std::string>& selected,
                                 const std::vector<std::string>& truth) {
    std::set<std::string> truth_set(truth.begin(), truth.end());
    std::set<std::string> sel_set(selected.begin(), selected.end());
    size_t tp = 0;
    for (const auto& s : sel_set)
        if (truth_set.count(s)) ++tp;
    PrecisionRecall pr;
    if (!sel_set.empty())
        pr.precision = 100.0 * static_cast<double>(tp) / static_cast<double>(sel_set.size());
    if (!truth_set.empty())
        pr.recall = 100.0 * static_cast<double>(tp) / static_cast<double>(truth_set.size());
    return pr;
}

double metric_path(const std::vector<Vec3>& extracted, const std::vector<Vec3>& target) {
    return dtw_similarity(extracted, target);
}

}  // namespace cogs
