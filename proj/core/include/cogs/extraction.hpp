#ifndef COGS_EXTRACTION_HPP
#define COGS_EXTRACTION_HPP

#include <string>
#include <vector>

#include "cogs/fitting.hpp"
#include "cogs/gesture.hpp"
#include "cogs/scene.hpp"

namespace cogs {

/// Raw gesture value for a path parameter: every recorded joint pose plus
/// the dominant-hand index-tip polyline resampled to uniform arc length.
struct Path {
    std::vector<HandFrame> frames;
    std::vector<Vec3> polyline;
};

struct ExtractionConfig {
    double ray_length_m = 10.0;
    double cone_height_m = 10.0;
    double cone_vertex_offset_m = 0.30;  // behind the fitted-circle plane
    double cone_min_radius_m = 0.01;
    double move_threshold_m = 0.02;
    double pinch_threshold_m = 0.03;  // index<->middle merge for surface size
    size_t path_samples = 64;
};

/// Pointing ray: from the index metacarpal through the index fingertip.
Ray hand_ray(const HandFrame& frame, Hand hand, double length_m = 10.0);

/// Mean of per-frame first-hit points, skipping frames with no hit.
Vec3 extract_position(const GestureSegment& seg, const Scene& scene,
                      const std::vector<std::string>& ignore,
                      const ExtractionConfig& cfg = {});

/// Selection cone from a pointing segment: axis = mean ray direction,
/// base circle least-squares fitted to index tips projected on the plane
/// through the mean palm position, vertex offset behind that plane.
Cone build_cone(const GestureSegment& seg, const ExtractionConfig& cfg = {});

std::vector<std::string> extract_object(const GestureSegment& seg, const Scene& scene,
                                        const ExtractionConfig& cfg = {});

/// Normalized mean of the per-frame hand-ray directions.
Vec3 extract_direction(const GestureSegment& seg, const ExtractionConfig& cfg = {});

/// One hand: palm rotation delta last * first^-1. Two hands: minimal-arc
/// rotation between the first and last inter-palm line directions.
Quat extract_rotation(const GestureSegment& seg, const ExtractionConfig& cfg = {});

/// Two hands: mean inter-palm distance. One hand: mean thumb-index
/// distance, or, when the index and middle tips are merged, the mean
/// palm-to-nearest-surface ray length.
double extract_size(const GestureSegment& seg, const Scene& scene,
                    const ExtractionConfig& cfg = {});

Path extract_path(const GestureSegment& seg, const ExtractionConfig& cfg = {});

}  // namespace cogs

#endif
