#pragma once

#include <string>
#include <vector>

#include "driftbench/geometry.hpp"

namespace driftbench {

enum class FieldKind { Constant, Rotating, Oscillating };

// One piece of the planar field timeline. The field vector always has
// magnitude `amplitude`; the three kinds differ only in how the direction
// evolves over [t_start, t_end).
struct FieldSegment {
    FieldKind kind = FieldKind::Constant;
    double t_start = 0.0;            // s
    double t_end = 0.0;              // s
    double amplitude = 5.0;          // mT
    double base_angle = 0.0;         // rad
    double frequency = 0.0;          // Hz, 0 for Constant
    double angular_amplitude = 0.0;  // rad, Oscillating only
    int rotation_sign = +1;          // +1/-1, Rotating only
    double phase = 0.0;              // rad

    void validate() const;  // throws input_error on bad parameters
};

// Contiguous, non-overlapping segments tiling [span_start, span_end].
struct FieldSchedule {
    std::vector<FieldSegment> segments;

    void validate() const;  // contiguity, per-segment checks
    double span_start() const;
    double span_end() const;
    // active segment at time t; segments are half-open except the last,
    // which includes its end point
    const FieldSegment& segment_at(double t) const;
};

// direction of the active segment's field at time t, continuous within a
// segment (rotating segments accumulate beyond +-pi)
double field_angle(const FieldSchedule& schedule, double t);
double segment_angle(const FieldSegment& seg, double t);

// planar field vector (Bx, By) in mT
Vec2 eval_field(const FieldSchedule& schedule, double t);

// uniform-rate CSV log `time_s,Bx_mT,By_mT` covering the full span,
// both endpoints included
void emit_field_log(const FieldSchedule& schedule, double sample_rate_hz,
                    const std::string& path);

}  // namespace driftbench
