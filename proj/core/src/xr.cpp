#include "cogs/xr.hpp"

#include <algorithm>
#include <cmath>

namespace cogs {

std::string to_string(ParamKind k) {
    switch (k) {
        case ParamKind::Position: return "position";
        case ParamKind::Object: return "object";
        case ParamKind::ObjectList: return "object_list";
        case ParamKind::Direction: return "direction";
        case ParamKind::RotationDelta: return "rotation";
        case ParamKind::Size: return "size";
        case ParamKind::Path: return "path";
        case ParamKind::Color: return "color";
        case ParamKind::ShapeType: return "shape_type";
    }
    return "?";
}

std::optional<ParamKind> param_kind_from_string(const std::string& s) {
    static const std::pair<const char*, ParamKind> table[] = {
        {"position", ParamKind::Position},   {"object", ParamKind::Object},
        {"object_list", ParamKind::ObjectList}, {"direction", ParamKind::Direction},
        {"rotation", ParamKind::RotationDelta}, {"size", ParamKind::Size},
        {"path", ParamKind::Path},           {"color", ParamKind::Color},
        {"shape_type", ParamKind::ShapeType},
    };
    for (const auto& [name, kind] : table)
        if (s == name) return kind;
    return std::nullopt;
}

const ParamSpec* FunctionSignature::param(const std::string& pname) const {
    for (const auto& p : params)
        if (p.name == pname) return &p;
    return nullptr;
}

std::string FunctionSignature::display() const {
    std::string out = name + "(";
    for (size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        out += params[i].name;
    }
    return out + ")";
}

const FunctionSignature* FunctionCatalog::find(const std::string& name) const {
    for (const auto& f : functions)
        if (f.name == name) return &f;
    return nullptr;
}

FunctionCatalog FunctionCatalog::default_catalog() {
    return FunctionCatalog{{
        {"select",
         "picks the objects of a given color out of a list of objects",
         {{"objects", ParamKind::ObjectList}, {"color", ParamKind::Color}}},
        {"move",
         "moves an object to a target position",
         {{"object", ParamKind::Object}, {"position", ParamKind::Position}}},
        {"rotate_dir",
         "turns an object so its forward axis points along a target direction",
         {{"object", ParamKind::Object}, {"direction", ParamKind::Direction}}},
        {"rotate",
         "applies a rotation on top of an object's current rotation",
         {{"object", ParamKind::Object}, {"rotation", ParamKind::RotationDelta}}},
        {"resize",
         "uniformly rescales an object so its largest extent equals a target size",
         {{"object", ParamKind::Object}, {"size", ParamKind::Size}}},
        {"move_path",
         "makes an object travel back and forth along a demonstrated trajectory",
         {{"object", ParamKind::Object}, {"path", ParamKind::Path}}},
        {"draw_path",
         "fits a named shape (line, circle or sine) to a sketched path and adds it to the scene",
         {{"path", ParamKind::Path}, {"shape_type", ParamKind::ShapeType}}},
        {"set_color",
         "sets the color of an object",
         {{"object", ParamKind::Object}, {"color", ParamKind::Color}}},
    }};
}

std::string general_error_message(const FunctionCatalog& catalog) {
    std::string list;
    for (size_t i = 0; i < catalog.functions.size(); ++i) {
        if (i) list += ", ";
        list += catalog.functions[i].name;
    }
    return "Sorry, the system is unable to do that, the system is able to do " + list + ".";
}

Rgb color_from_name(const std::string& name) {
    static const std::pair<const char*, Rgb> css[] = {
        {"black", {0, 0, 0}},
        {"silver", {192 / 255.0, 192 / 255.0, 192 / 255.0}},
        {"gray", {128 / 255.0, 128 / 255.0, 128 / 255.0}},
        {"white", {1, 1, 1}},
        {"maroon", {128 / 255.0, 0, 0}},
        {"red", {1, 0, 0}},
        {"purple", {128 / 255.0, 0, 128 / 255.0}},
        {"fuchsia", {1, 0, 1}},
        {"green", {0, 128 / 255.0, 0}},
        {"lime", {0, 1, 0}},
        {"olive", {128 / 255.0, 128 / 255.0, 0}},
        {"yellow", {1, 1, 0}},
        {"navy", {0, 0, 128 / 255.0}},
        {"blue", {0, 0, 1}},
        {"teal", {0, 128 / 255.0, 128 / 255.0}},
        {"aqua", {0, 1, 1}},
    };
    std::string lower;
    for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (const auto& [n, rgb] : css)
        if (lower == n) return rgb;
    throw UnknownColor("unknown color name '" + name + "'");
}

namespace {

// Scene files carry colors rounded to 3 decimals; the named palette values
// are at least 0.2 apart per channel, so 2e-3 cleanly separates them.
bool rgb_equals(const Rgb& a, const Rgb& b) {
    return std::abs(a[0] - b[0]) < 2e-3 && std::abs(a[1] - b[1]) < 2e-3 &&
           std::abs(a[2] - b[2]) < 2e-3;
}

const Value& require_param(const FunctionCall& call, const std::string& name) {
    auto it = call.params.find(name);
    if (it == call.params.end() || std::holds_alternative<std::monostate>(it->second))
        throw SchemaError(call.function + ": parameter '" + name + "' is not bound");
    return it->second;
}

template <typename T>
const T& param_as(const FunctionCall& call, const std::string& name) {
    const Value& v = require_param(call, name);
    if (!std::holds_alternative<T>(v))
        throw SchemaError(call.function + ": parameter '" + name + "' has the wrong type");
    return std::get<T>(v);
}

SceneObject& manipulatable_object(Scene& scene, const std::string& name) {
    SceneObject* obj = scene.find(name);
    if (!obj) throw UnknownObject("no object named '" + name + "'");
    if (!obj->manipulatable)
        throw NotManipulatable("object '" + name + "' cannot be manipulated");
    return *obj;
}

/// The object slot accepts a single name or a select-result set.
std::vector<std::string> object_targets(const FunctionCall& call) {
    const Value& v = require_param(call, "object");
    if (std::holds_alternative<std::string>(v)) return {std::get<std::string>(v)};
    if (std::holds_alternative<ObjectSet>(v)) return std::get<ObjectSet>(v).names;
    throw SchemaError(call.function + ": parameter 'object' has the wrong type");
}

std::string unique_name(const Scene& scene, const std::string& base) {
    if (!scene.find(base)) return base;
    for (int i = 2;; ++i) {
        std::string candidate = base + "_" + std::to_string(i);
        if (!scene.find(candidate)) return candidate;
    }
}

std::vector<Vec3> fit_shape_polyline(const Path& path, const std::string& shape_type) {
    const auto& pts = path.polyline;
    const size_t kSamples = 64;
    if (shape_type == "line") {
        LineFit fit = fit_line(pts);
        Vec3 a = fit.point - fit.direction * (fit.length / 2);
        Vec3 b = fit.point + fit.direction * (fit.length / 2);
        std::vector<Vec3> out;
        for (size_t i = 0; i < kSamples; ++i)
            out.push_back(a + (b - a) * (static_cast<double>(i) / (kSamples - 1)));
        return out;
    }
    PlaneFrame plane = fit_plane(pts);
    std::vector<Point2> proj = project_to_plane(pts, plane);
    if (shape_type == "circle") {
        CircleFit fit = fit_circle_2d(proj);
        std::vector<Vec3> out;
        for (size_t i = 0; i < kSamples; ++i) {
            double a = 2 * kPi * static_cast<double>(i) / kSamples;
            out.push_back(unproject(plane, {fit.center[0] + fit.radius * std::cos(a),
                                            fit.center[1] + fit.radius * std::sin(a)}));
        }
        return out;
    }
    if (shape_type == "sine") {
        SineFit fit = fit_sine(proj);
        double umin = proj[0][0], umax = proj[0][0];
        for (const auto& p : proj) {
            umin = std::min(umin, p[0]);
            umax = std::max(umax, p[0]);
        }
        std::vector<Vec3> out;
        for (size_t i = 0; i < kSamples; ++i) {
            double u = umin + (umax - umin) * static_cast<double>(i) / (kSamples - 1);
            double v = fit.amplitude * std::sin(2 * kPi * u / fit.period + fit.phase) +
                       fit.offset;
            out.push_back(unproject(plane, {u, v}));
        }
        return out;
    }
    throw SchemaError("draw_path: unknown shape_type '" + shape_type +
                      "' (expected line, circle or sine)");
}

std::vector<double> cumulative_lengths(const std::vector<Vec3>& pts) {
    std::vector<double> cum(pts.size(), 0.0);
    for (size_t i = 1; i < pts.size(); ++i)
        cum[i] = cum[i - 1] + distance(pts[i], pts[i - 1]);
    return cum;
}

Vec3 point_at_arc(const std::vector<Vec3>& pts, const std::vector<double>& cum, double s) {
    s = std::clamp(s, 0.0, cum.back());
    size_t seg = 0;
    while (seg + 2 < cum.size() && cum[seg + 1] < s) ++seg;
    double seg_len = cum[seg + 1] - cum[seg];
    double t = seg_len > 1e-15 ? (s - cum[seg]) / seg_len : 0.0;
    return pts[seg] + (pts[seg + 1] - pts[seg]) * t;
}

}  // namespace

ExecResult execute_call(const Scene& scene, const FunctionCall& call,
                        const FunctionCatalog& catalog) {
    const FunctionSignature* sig = catalog.find(call.function);
    if (!sig) throw UnknownFunction(general_error_message(catalog));

    ExecResult result{scene, std::nullopt};
    Scene& next = result.scene;

    if (call.function == "select") {
        const auto& objects = param_as<ObjectSet>(call, "objects");
        Rgb target = color_from_name(param_as<std::string>(call, "color"));
        std::vector<std::string> matched;
        for (const auto& name : objects.names) {
            const SceneObject* obj = next.find(name);
            if (!obj) throw UnknownObject("no object named '" + name + "'");
            if (obj->color && rgb_equals(*obj->color, target)) matched.push_back(obj->name);
        }
        result.selected = std::move(matched);
        return result;
    }

    if (call.function == "move") {
        const Vec3& pos = param_as<Vec3>(call, "position");
        for (const auto& name : object_targets(call))
            manipulatable_object(next, name).position = pos;
        return result;
    }

    if (call.function == "rotate_dir") {
        Vec3 dir = normalized(param_as<Vec3>(call, "direction"));
        for (const auto& name : object_targets(call)) {
            SceneObject& obj = manipulatable_object(next, name);
            Quat arc = rotation_between(obj.forward(), dir);
            obj.rotation = (arc * obj.rotation).normalized();
        }
        return result;
    }

    if (call.function == "rotate") {
        const Quat& delta = param_as<Quat>(call, "rotation");
        for (const auto& name : object_targets(call)) {
            SceneObject& obj = manipulatable_object(next, name);
            obj.rotation = (delta * obj.rotation).normalized();
        }
        return result;
    }

    if (call.function == "resize") {
        double size = param_as<double>(call, "size");
        if (size <= 0) throw SchemaError("resize: size must be > 0");
        for (const auto& name : object_targets(call)) {
            SceneObject& obj = manipulatable_object(next, name);
            double largest = std::max({obj.scale.x, obj.scale.y, obj.scale.z});
            double f = size / largest;
            obj.scale = obj.scale * f;
        }
        return result;
    }

    if (call.function == "move_path") {
        const Path& path = param_as<Path>(call, "path");
        if (path.polyline.size() < 2)
            throw EmptyPath("move_path: path needs at least 2 points");
        for (const auto& name : object_targets(call)) {
            SceneObject& obj = manipulatable_object(next, name);
            obj.path = PathAttachment{path.polyline, 0.5, 0.0, 1};
            obj.position = path.polyline.front();
        }
        return result;
    }

    if (call.function == "draw_path") {
        const Path& path = param_as<Path>(call, "path");
        const std::string& shape = param_as<std::string>(call, "shape_type");
        std::vector<Vec3> poly = fit_shape_polyline(path, shape);

        SceneObject obj;
        obj.name = unique_name(next, "drawn_path");
        Vec3 lo = poly[0], hi = poly[0], sum;
        for (const auto& p : poly) {
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
            sum += p;
        }
        obj.position = sum / static_cast<double>(poly.size());
        obj.scale = {std::max(hi.x - lo.x, 1e-3), std::max(hi.y - lo.y, 1e-3),
                     std::max(hi.z - lo.z, 1e-3)};
        obj.polyline = std::move(poly);
        next.objects.push_back(std::move(obj));
        return result;
    }

    if (call.function == "set_color") {
        Rgb rgb = color_from_name(param_as<std::string>(call, "color"));
        for (const auto& name : object_targets(call))
            manipulatable_object(next, name).color = rgb;
        return result;
    }

    throw UnknownFunction(general_error_message(catalog));
}

Scene step_paths(const Scene& scene, double dt_s) {
    if (dt_s <= 0) throw SchemaError("step_paths: dt must be > 0");
    Scene next = scene;
    for (auto& obj : next.objects) {
        if (!obj.path) continue;
        auto& att = *obj.path;
        std::vector<double> cum = cumulative_lengths(att.waypoints);
        double len = cum.back();
        if (len < 1e-15) continue;

        // Unfold to a phase in [0, 2*len), advance, fold back.
        double phase = att.dir > 0 ? att.arc_pos : 2 * len - att.arc_pos;
        phase = std::fmod(phase + att.speed_mps * dt_s, 2 * len);
        if (phase <= len) {
            att.arc_pos = phase;
            att.dir = 1;
        } else {
            att.arc_pos = 2 * len - phase;
            att.dir = -1;
        }
        obj.position = point_at_arc(att.waypoints, cum, att.arc_pos);
    }
    return next;
}

}  // namespace cogs
