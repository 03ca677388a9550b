#include "cogs/extraction.hpp"

namespace cogs {

Ray hand_ray(const HandFrame& frame, Hand hand, double length_m) {
    const auto& hp = frame.hand(hand);
    if (!hp) throw DegenerateRay("hand_ray: requested hand is absent");
    const Vec3& origin = hp->index_metacarpal.position;
    const Vec3& tip = hp->index_tip.position;
    if (distance(origin, tip) < 1e-12)
        throw DegenerateRay("hand_ray: index tip coincides with metacarpal");
    return Ray{origin, normalized(tip - origin), length_m};
}

namespace {

// Frames where the pointing hand is absent are skipped, not interpolated.
std::vector<Ray> pointing_rays(const GestureSegment& seg, const ExtractionConfig& cfg,
                               Hand* hand_out = nullptr) {
    Hand hand = dominant_hand(seg);
    if (hand_out) *hand_out = hand;
    std::vector<Ray> rays;
    for (const auto& f : seg.frames) {
        if (!f.hand(hand)) continue;
        rays.push_back(hand_ray(f, hand, cfg.ray_length_m));
    }
    if (rays.empty()) throw DegenerateRay("no frames with the pointing hand");
    return rays;
}

Vec3 mean_ray_direction(const std::vector<Ray>& rays) {
    Vec3 sum;
    for (const auto& r : rays) sum += r.direction;
    if (norm(sum) < 1e-9)
        throw DegenerateRay("ray directions cancel out");
    return normalized(sum);
}

}  // namespace

Vec3 extract_position(const GestureSegment& seg, const Scene& scene,
                      const std::vector<std::string>& ignore,
                      const ExtractionConfig& cfg) {
    auto rays = pointing_rays(seg, cfg);
    Vec3 sum;
    size_t hits = 0;
    for (const auto& ray : rays) {
        auto hit = ray_intersect(scene, ray, ignore);
        if (hit.empty()) continue;
        sum += hit.front().point;
        ++hits;
    }
    if (hits == 0) throw NoIntersection("pointing rays never hit the scene");
    return sum / static_cast<double>(hits);
}

Cone build_cone(const GestureSegment& seg, const ExtractionConfig& cfg) {
    Hand hand;
    auto rays = pointing_rays(seg, cfg, &hand);
    Vec3 axis = mean_ray_direction(rays);

    Vec3 palm_sum;
    std::vector<Vec3> tips;
    size_t n = 0;
    for (const auto& f : seg.frames) {
        const auto& hp = f.hand(hand);
        if (!hp) continue;
        palm_sum += hp->palm.position;
        tips.push_back(hp->index_tip.position);
        ++n;
    }
    Vec3 mean_palm = palm_sum / static_cast<double>(n);

    // Project index tips onto the plane {x : dot(x - mean_palm, axis) = 0}.
    Vec3 u = std::abs(axis.x) < 0.9 ? normalized(cross(axis, Vec3{1, 0, 0}))
                                    : normalized(cross(axis, Vec3{0, 1, 0}));
    Vec3 v = cross(axis, u);
    std::vector<Point2> proj;
    proj.reserve(tips.size());
    for (const auto& tip : tips) {
        Vec3 d = tip - mean_palm;
        proj.push_back({dot(d, u), dot(d, v)});
    }

    Point2 center2{0, 0};
    double radius = 0.0;
    try {
        CircleFit fit = fit_circle_2d(proj);
        center2 = fit.center;
        radius = fit.radius;
    } catch (const DegenerateInput&) {
        // Static pointing: all tips coincide or are collinear; fall back to
        // their in-plane centroid with the minimum radius.
        for (const auto& p : proj) {
            center2[0] += p[0];
            center2[1] += p[1];
        }
        center2[0] /= proj.size();
        center2[1] /= proj.size();
    }
    radius = std::max(radius, cfg.cone_min_radius_m);

    Cone cone;
    cone.base_center = mean_palm + u * center2[0] + v * center2[1];
    cone.axis = axis;
    cone.vertex = cone.base_center - axis * cfg.cone_vertex_offset_m;
    cone.base_radius = radius;
    cone.height = cfg.cone_height_m;
    return cone;
}

std::vector<std::string> extract_object(const GestureSegment& seg, const Scene& scene,
                                        const ExtractionConfig& cfg) {
    return cone_intersect(scene, build_cone(seg, cfg));
}

Vec3 extract_direction(const GestureSegment& seg, const ExtractionConfig& cfg) {
    return mean_ray_direction(pointing_rays(seg, cfg));
}

Quat extract_rotation(const GestureSegment& seg, const ExtractionConfig& cfg) {
    HandsUsed used = hands_used(seg, cfg.move_threshold_m);
    if (used == HandsUsed::Both) {
        const HandFrame* first = nullptr;
        const HandFrame* last = nullptr;
        for (const auto& f : seg.frames) {
            if (!f.left || !f.right) continue;
            if (!first) first = &f;
            last = &f;
        }
        if (!first || first == last)
            throw NoHands("two-hand rotation needs two frames with both hands");
        Vec3 line0 = first->right->palm.position - first->left->palm.position;
        Vec3 line1 = last->right->palm.position - last->left->palm.position;
        if (norm(line0) < 1e-9 || norm(line1) < 1e-9)
            throw ZeroLengthLine("palms coincide; inter-palm line undefined");
        return rotation_between(line0, line1);
    }

    Hand hand = used == HandsUsed::LeftOnly ? Hand::Left : Hand::Right;
    const HandPose* first = nullptr;
    const HandPose* last = nullptr;
    for (const auto& f : seg.frames) {
        const auto& hp = f.hand(hand);
        if (!hp) continue;
        if (!first) first = &*hp;
        last = &*hp;
    }
    if (!first) throw NoHands("rotation hand absent from segment");
    return (last->palm.rotation * first->palm.rotation.conjugate()).normalized();
}

double extract_size(const GestureSegment& seg, const Scene& scene,
                    const ExtractionConfig& cfg) {
    HandsUsed used = hands_used(seg, cfg.move_threshold_m);
    if (used == HandsUsed::Both) {
        double sum = 0.0;
        size_t n = 0;
        for (const auto& f : seg.frames) {
            if (!f.left || !f.right) continue;
            sum += distance(f.left->palm.position, f.right->palm.position);
            ++n;
        }
        if (n == 0) throw NoHands("two-hand size needs frames with both hands");
        return sum / static_cast<double>(n);
    }

    Hand hand = used == HandsUsed::LeftOnly ? Hand::Left : Hand::Right;
    double pinch_sum = 0.0, thumb_sum = 0.0;
    size_t n = 0;
    for (const auto& f : seg.frames) {
        const auto& hp = f.hand(hand);
        if (!hp) continue;
        pinch_sum += distance(hp->index_tip.position, hp->middle_tip.position);
        thumb_sum += distance(hp->thumb_tip.position, hp->index_tip.position);
        ++n;
    }
    if (n == 0) throw NoHands("size hand absent from segment");

    if (pinch_sum / n >= cfg.pinch_threshold_m) return thumb_sum / n;

    // Index and middle tips merged: measure to the nearest surface along
    // the palm's facing direction (local -y of the palm joint).
    double len_sum = 0.0;
    size_t hits = 0;
    for (const auto& f : seg.frames) {
        const auto& hp = f.hand(hand);
        if (!hp) continue;
        Vec3 facing = hp->palm.rotation.rotate({0, -1, 0});
        Ray ray{hp->palm.position, facing, cfg.ray_length_m};
        auto hit = ray_intersect(scene, ray);
        if (hit.empty()) continue;
        len_sum += hit.front().distance;
        ++hits;
    }
    if (hits == 0) throw NoSurfaceHit("palm ray never reaches a surface");
    return len_sum / static_cast<double>(hits);
}

Path extract_path(const GestureSegment& seg, const ExtractionConfig& cfg) {
    Hand hand = dominant_hand(seg);
    Path path;
    path.frames = seg.frames;
    std::vector<Vec3> tips;
    for (const auto& f : seg.frames) {
        const auto& hp = f.hand(hand);
        if (!hp) continue;
        tips.push_back(hp->index_tip.position);
    }
    if (tips.empty()) throw NoHands("path hand absent from segment");
    path.polyline =
        tips.size() == 1 ? tips : resample_polyline(tips, cfg.path_samples);
    return path;
}

}  // namespace cogs
