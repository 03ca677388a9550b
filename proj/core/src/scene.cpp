#include "cogs/scene.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include <json.hpp>

namespace cogs {

using nlohmann::json;

bool name_equals(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

const SceneObject* Scene::find(const std::string& name) const {
    for (const auto& o : objects)
        if (name_equals(o.name, name)) return &o;
    return nullptr;
}

SceneObject* Scene::find(const std::string& name) {
    for (auto& o : objects)
        if (name_equals(o.name, name)) return &o;
    return nullptr;
}

namespace {

Vec3 parse_vec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3)
        throw SchemaError(where + ": expected an array of 3 numbers");
    for (const auto& c : j)
        if (!c.is_number()) throw SchemaError(where + ": expected numbers");
    Vec3 v{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    if (!finite(v)) throw SchemaError(where + ": non-finite component");
    return v;
}

}  // namespace

Scene load_scene(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("scene: invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw SchemaError("scene: top level must be an array");

    Scene scene;
    for (const auto& jo : doc) {
        if (!jo.is_object()) throw SchemaError("scene: entries must be objects");
        SceneObject obj;
        if (!jo.contains("name") || !jo["name"].is_string())
            throw SchemaError("scene object: missing name");
        obj.name = jo["name"].get<std::string>();
        if (obj.name.empty()) throw SchemaError("scene object: empty name");
        if (scene.find(obj.name))
            throw SchemaError("scene: duplicate object name '" + obj.name + "'");

        if (!jo.contains("position")) throw SchemaError(obj.name + ": missing position");
        obj.position = parse_vec3(jo["position"], obj.name + ".position");
        if (!jo.contains("rotation")) throw SchemaError(obj.name + ": missing rotation");
        obj.rotation = quat_from_euler_deg(parse_vec3(jo["rotation"], obj.name + ".rotation"));
        if (!jo.contains("scale")) throw SchemaError(obj.name + ": missing scale");
        obj.scale = parse_vec3(jo["scale"], obj.name + ".scale");
        if (obj.scale.x <= 0 || obj.scale.y <= 0 || obj.scale.z <= 0)
            throw SchemaError(obj.name + ": scale components must be > 0");

        if (jo.contains("color")) {
            Vec3 c = parse_vec3(jo["color"], obj.name + ".color");
            if (c.x < 0 || c.x > 1 || c.y < 0 || c.y > 1 || c.z < 0 || c.z > 1)
                throw SchemaError(obj.name + ": color components must be in [0,1]");
            obj.color = Rgb{c.x, c.y, c.z};
        }
        if (jo.contains("manipulatable")) {
            if (!jo["manipulatable"].is_boolean())
                throw SchemaError(obj.name + ": manipulatable must be a boolean");
            obj.manipulatable = jo["manipulatable"].get<bool>();
        }
        scene.objects.push_back(std::move(obj));
    }
    return scene;
}

std::string format_3dp(double v) {
    double r = std::round(v * 1000.0) / 1000.0;  // round halves away from zero
    if (r == 0.0) r = 0.0;                       // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", r);
    return buf;
}

namespace {

void append_vec3(std::string& out, const Vec3& v) {
    out += '[';
    out += format_3dp(v.x);
    out += ", ";
    out += format_3dp(v.y);
    out += ", ";
    out += format_3dp(v.z);
    out += ']';
}

}  // namespace

std::string serialize_scene(const Scene& scene) {
    if (scene.objects.empty()) return "[]";
    std::string out = "[\n";
    for (size_t i = 0; i < scene.objects.size(); ++i) {
        const auto& o = scene.objects[i];
        out += "  {\"name\": ";
        out += json(o.name).dump();
        out += ", \"position\": ";
        append_vec3(out, o.position);
        out += ", \"rotation\": ";
        append_vec3(out, quat_to_euler_deg(o.rotation));
        out += ", \"scale\": ";
        append_vec3(out, o.scale);
        if (o.color) {
            out += ", \"color\": ";
            append_vec3(out, Vec3{(*o.color)[0], (*o.color)[1], (*o.color)[2]});
        }
        if (!o.manipulatable) out += ", \"manipulatable\": false";
        out += '}';
        if (i + 1 < scene.objects.size()) out += ',';
        out += '\n';
    }
    out += ']';
    return out;
}

Ray make_ray(const Vec3& origin, const Vec3& toward, double length) {
    if (length <= 0) throw DegenerateRay("ray length must be > 0");
    return Ray{origin, normalized(toward - origin), length};
}

namespace {

constexpr double kEps = 1e-12;

// Slab test in the box's local frame. Returns (tmin, tmax) or false.
bool obb_ray_range(const SceneObject& obj, const Ray& ray, double& tmin, double& tmax) {
    Quat inv = obj.rotation.conjugate();
    Vec3 o = inv.rotate(ray.origin - obj.position);
    Vec3 d = inv.rotate(ray.direction);
    Vec3 half = obj.scale * 0.5;

    tmin = -1e300;
    tmax = 1e300;
    const double oc[3] = {o.x, o.y, o.z};
    const double dc[3] = {d.x, d.y, d.z};
    const double hc[3] = {half.x, half.y, half.z};
    for (int i = 0; i < 3; ++i) {
        if (std::abs(dc[i]) < kEps) {
            if (oc[i] < -hc[i] || oc[i] > hc[i]) return false;
            continue;
        }
        double t1 = (-hc[i] - oc[i]) / dc[i];
        double t2 = (hc[i] - oc[i]) / dc[i];
        if (t1 > t2) std::swap(t1, t2);
        tmin = std::max(tmin, t1);
        tmax = std::min(tmax, t2);
        if (tmin > tmax) return false;
    }
    return true;
}

bool ignored(const std::string& name, const std::vector<std::string>& ignore) {
    return std::any_of(ignore.begin(), ignore.end(),
                       [&](const std::string& n) { return name_equals(n, name); });
}

}  // namespace

std::vector<RayHit> ray_intersect(const Scene& scene, const Ray& ray,
                                  const std::vector<std::string>& ignore) {
    std::vector<RayHit> hits;
    for (const auto& obj : scene.objects) {
        if (ignored(obj.name, ignore)) continue;
        double tmin, tmax;
        if (!obb_ray_range(obj, ray, tmin, tmax)) continue;
        if (tmax <= 0) continue;
        double t = tmin > 0 ? tmin : tmax;
        if (t > ray.length) continue;
        hits.push_back({obj.name, ray.origin + ray.direction * t, t});
    }
    std::stable_sort(hits.begin(), hits.end(),
                     [](const RayHit& a, const RayHit& b) { return a.distance < b.distance; });
    return hits;
}

bool cone_contains(const Cone& cone, const Vec3& point) {
    Vec3 u = point - cone.vertex;
    double t = dot(u, cone.axis);
    if (t < 0 || t > cone.height) return false;
    double d_plane = distance(cone.base_center, cone.vertex);
    if (d_plane < kEps) return false;
    double limit = cone.base_radius * t / d_plane;
    double radial = norm(u - cone.axis * t);
    return radial <= limit;
}

namespace {

// Segment [a, b] vs OBB overlap test (slab test restricted to [0, 1]).
bool segment_hits_box(const SceneObject& obj, const Vec3& a, const Vec3& b) {
    Vec3 d = b - a;
    double len = norm(d);
    if (len < kEps) {
        // Degenerate segment: point-in-box.
        Quat inv = obj.rotation.conjugate();
        Vec3 p = inv.rotate(a - obj.position);
        Vec3 half = obj.scale * 0.5;
        return std::abs(p.x) <= half.x && std::abs(p.y) <= half.y && std::abs(p.z) <= half.z;
    }
    Ray ray{a, d / len, len};
    double tmin, tmax;
    if (!obb_ray_range(obj, ray, tmin, tmax)) return false;
    return tmax >= 0 && tmin <= len;
}

}  // namespace

std::vector<std::string> cone_intersect(const Scene& scene, const Cone& cone) {
    std::vector<std::string> selected;
    Vec3 axis_end = cone.vertex + cone.axis * cone.height;
    for (const auto& obj : scene.objects) {
        bool inside = cone_contains(cone, obj.position);
        if (!inside) {
            Vec3 half = obj.scale * 0.5;
            for (int cx = -1; cx <= 1 && !inside; cx += 2)
                for (int cy = -1; cy <= 1 && !inside; cy += 2)
                    for (int cz = -1; cz <= 1 && !inside; cz += 2) {
                        Vec3 corner = obj.position +
                                      obj.rotation.rotate({half.x * cx, half.y * cy, half.z * cz});
                        inside = cone_contains(cone, corner);
                    }
        }
        if (!inside) inside = segment_hits_box(obj, cone.vertex, axis_end);
        if (inside) selected.push_back(obj.name);
    }
    return selected;
}

}  // namespace cogs
