#include "driftbench/fieldgen.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "driftbench/errors.hpp"

namespace driftbench {

void FieldSegment::validate() const {
    if (!(t_end > t_start)) throw input_error("field segment: t_end must exceed t_start");
    if (!(amplitude > 0.0)) throw input_error("field segment: amplitude must be positive");
    if (frequency < 0.0) throw input_error("field segment: frequency must be >= 0");
    if (kind == FieldKind::Constant && frequency != 0.0)
        throw input_error("constant field segment: frequency must be 0");
    if (kind == FieldKind::Rotating) {
        if (rotation_sign != 1 && rotation_sign != -1)
            throw input_error("rotating field segment: rotation_sign must be +1 or -1");
        if (frequency <= 0.0)
            throw input_error("rotating field segment: frequency must be positive");
    }
    if (kind == FieldKind::Oscillating) {
        if (!(angular_amplitude > 0.0 && angular_amplitude <= M_PI))
            throw input_error("oscillating field segment: angular_amplitude must be in (0, pi]");
        if (frequency <= 0.0)
            throw input_error("oscillating field segment: frequency must be positive");
    }
}

void FieldSchedule::validate() const {
    if (segments.empty()) throw input_error("field schedule: no segments");
    for (const auto& s : segments) s.validate();
    for (std::size_t i = 1; i < segments.size(); ++i) {
        if (segments[i].t_start != segments[i - 1].t_end)
            throw input_error("field schedule: segments must tile time with no gaps or overlap");
    }
}

double FieldSchedule::span_start() const { return segments.front().t_start; }
double FieldSchedule::span_end() const { return segments.back().t_end; }

const FieldSegment& FieldSchedule::segment_at(double t) const {
    if (segments.empty()) throw input_error("field schedule: no segments");
    if (t < span_start() || t > span_end())
        throw input_error("field schedule: time " + std::to_string(t) + " outside span [" +
                          std::to_string(span_start()) + ", " + std::to_string(span_end()) + "]");
    for (const auto& s : segments) {
        if (t >= s.t_start && t < s.t_end) return s;
    }
    return segments.back();  // t == span_end
}

double segment_angle(const FieldSegment& seg, double t) {
    const double tau = t - seg.t_start;
    switch (seg.kind) {
        case FieldKind::Constant:
            return seg.base_angle;
        case FieldKind::Rotating:
            return seg.base_angle + seg.rotation_sign * 2.0 * M_PI * seg.frequency * tau +
                   seg.phase;
        case FieldKind::Oscillating:
            return seg.base_angle +
                   seg.angular_amplitude * std::sin(2.0 * M_PI * seg.frequency * tau + seg.phase);
    }
    return seg.base_angle;
}

double field_angle(const FieldSchedule& schedule, double t) {
    return segment_angle(schedule.segment_at(t), t);
}

Vec2 eval_field(const FieldSchedule& schedule, double t) {
    const FieldSegment& seg = schedule.segment_at(t);
    const double angle = segment_angle(seg, t);
    return {seg.amplitude * std::cos(angle), seg.amplitude * std::sin(angle)};
}

void emit_field_log(const FieldSchedule& schedule, double sample_rate_hz,
                    const std::string& path) {
    if (!(sample_rate_hz > 0.0)) throw input_error("field log: sample rate must be positive");
    schedule.validate();

    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw input_error("field log: cannot open '" + path + "' for writing");

    const double t0 = schedule.span_start();
    const double span = schedule.span_end() - t0;
    const long long n = llround(span * sample_rate_hz);

    out << "time_s,Bx_mT,By_mT\n";
    char row[128];
    for (long long i = 0; i <= n; ++i) {
        const double t = t0 + static_cast<double>(i) / sample_rate_hz;
        const Vec2 b = eval_field(schedule, std::min(t, schedule.span_end()));
        std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g\n", t, b.x, b.y);
        out << row;
    }
    if (!out) throw input_error("field log: write failed for '" + path + "'");
}

}  // namespace driftbench
