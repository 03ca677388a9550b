#ifndef COGS_GESTURE_HPP
#define COGS_GESTURE_HPP

#include <optional>
#include <string>
#include <vector>

#include "cogs/geom.hpp"
#include "cogs/transcript.hpp"

namespace cogs {

struct JointPose {
    Vec3 position;  // meters, world frame
    Quat rotation;
};

enum class Hand { Left, Right };

/// The five tracked joints of one hand.
struct HandPose {
    JointPose palm;
    JointPose thumb_tip;
    JointPose index_tip;
    JointPose middle_tip;
    JointPose index_metacarpal;
};

struct HandFrame {
    int64_t t_ms = 0;
    std::optional<HandPose> left;
    std::optional<HandPose> right;

    const std::optional<HandPose>& hand(Hand h) const {
        return h == Hand::Left ? left : right;
    }
};

struct GestureTrace {
    std::vector<HandFrame> frames;  // strictly increasing t_ms
};

/// Contiguous slice of a trace plus the interval it was cut with.
struct GestureSegment {
    std::vector<HandFrame> frames;
    TimeInterval interval;
};

enum class HandsUsed { LeftOnly, RightOnly, Both };

/// Trace JSON: {"frames":[{"t_ms":int,"left":{joint:{"pos":[..],"rot":[x,y,z,w]}}?,
/// "right":{...}?}]}. A present hand must carry all five joints.
GestureTrace load_trace(const std::string& json_text);
std::string serialize_trace(const GestureTrace& trace);

/// All frames with t_ms inside [start, end]; throws EmptySegment when none.
GestureSegment segment(const GestureTrace& trace, const TimeInterval& interval);

struct Movement {
    bool left = false;
    bool right = false;
};

/// A hand moved iff the max palm displacement from that hand's first
/// appearance strictly exceeds threshold_m.
Movement detect_movement(const GestureSegment& seg, double threshold_m);

/// Both = both hands move, or both are present in every frame (the static
/// two-hand pose). Throws NoHands on a segment with no hand data.
HandsUsed hands_used(const GestureSegment& seg, double move_threshold_m = 0.02);

/// The hand a pointing/path extractor should read: the only present hand,
/// otherwise the one with greater total index-tip travel (ties go right).
Hand dominant_hand(const GestureSegment& seg);

}  // namespace cogs

#endif
