#include "driftbench/swimiso.hpp"

#include <cmath>

#include "driftbench/errors.hpp"

namespace driftbench {

std::vector<Vec2> relative_translation(const DisplacementSeries& swim,
                                       const std::vector<Vec2>& mag_reference) {
    if (swim.delta.size() != mag_reference.size())
        throw data_error("relative translation: swimmer and reference series differ in length");
    std::vector<Vec2> rel(swim.delta.size());
    for (std::size_t j = 0; j < rel.size(); ++j) rel[j] = swim.delta[j] - mag_reference[j];
    return rel;
}

namespace {

// least-squares velocity (with intercept) of the series over frames with
// t in [t_a, t_b]
Vec2 window_velocity(const std::vector<Vec2>& series, const std::vector<double>& times,
                     double t_a, double t_b, std::size_t* n_out = nullptr) {
    double st = 0, stt = 0, sx = 0, sy = 0, stx = 0, sty = 0;
    std::size_t n = 0;
    for (std::size_t j = 0; j < series.size(); ++j) {
        const double t = times[j];
        if (t < t_a - 1e-9 || t > t_b + 1e-9) continue;
        st += t;
        stt += t * t;
        sx += series[j].x;
        sy += series[j].y;
        stx += t * series[j].x;
        sty += t * series[j].y;
        ++n;
    }
    if (n_out) *n_out = n;
    if (n < 2) return {0.0, 0.0};
    const double den = n * stt - st * st;
    if (den <= 0) return {0.0, 0.0};
    return {(n * stx - st * sx) / den, (n * sty - st * sy) / den};
}

const Vec2* sample_at(const std::vector<Vec2>& series, const std::vector<double>& times,
                      double t) {
    const Vec2* best = nullptr;
    double best_d = 1e300;
    for (std::size_t j = 0; j < series.size(); ++j) {
        const double d = std::abs(times[j] - t);
        if (d < best_d) {
            best_d = d;
            best = &series[j];
        }
    }
    return best;
}

}  // namespace

SpeedEstimate swim_speed(const std::vector<Vec2>& relative, const std::vector<double>& times,
                         double t_a, double t_b, double body_length) {
    if (relative.size() != times.size())
        throw data_error("swim speed: series and time vector differ in length");
    if (!(body_length > 0)) throw input_error("swim speed: body length must be positive");
    if (t_b - t_a < kMinFitWindowS)
        throw input_error("swim speed: window must span at least 5 s");

    std::size_t n = 0;
    const Vec2 v = window_velocity(relative, times, t_a, t_b, &n);
    if (n < 3) throw input_error("swim speed: window contains fewer than 3 frames");

    SpeedEstimate est;
    est.vx = v.x;
    est.vy = v.y;
    est.speed_um_s = norm(v);
    est.speed_bl_s = est.speed_um_s / body_length;
    est.direction = est.speed_um_s > 0 ? std::atan2(v.y, v.x) : 0.0;
    return est;
}

DirectionChange direction_change(const std::vector<Vec2>& relative,
                                 const std::vector<double>& times, double t_a, double t_b) {
    if (relative.size() != times.size())
        throw data_error("direction change: series and time vector differ in length");
    if (times.empty()) throw data_error("direction change: empty series");
    if (t_a - times.front() < kMinFitWindowS || t_b - t_a < kMinFitWindowS)
        throw input_error("direction change: need at least 5 s on each side of the window start");

    const Vec2 v_pre = window_velocity(relative, times, times.front(), t_a);
    const Vec2 v_post = window_velocity(relative, times, t_a, t_b);

    DirectionChange out;
    out.speed_pre = norm(v_pre);
    out.speed_post = norm(v_post);
    out.pre_defined = out.speed_pre >= kMinDirectionSpeedUmS;
    out.post_defined = out.speed_post >= kMinDirectionSpeedUmS;
    if (out.pre_defined) out.direction_pre = std::atan2(v_pre.y, v_pre.x);
    if (out.post_defined) out.direction_post = std::atan2(v_post.y, v_post.x);
    if (out.pre_defined && out.post_defined)
        out.change = std::abs(wrap_angle(out.direction_post - out.direction_pre));
    return out;
}

OscResponse detect_osc_response(const std::vector<Vec2>& relative,
                                const std::vector<double>& times, double t_a, double t_b) {
    if (relative.size() != times.size())
        throw data_error("oscillation response: series and time vector differ in length");

    OscResponse out;
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t j = 0; j < relative.size(); ++j) {
        if (times[j] < t_a - 1e-9) {
            sum += norm2(relative[j]);
            ++n;
        }
    }
    out.pre_rmse = n > 0 ? std::sqrt(sum / static_cast<double>(n)) : 0.0;

    const Vec2* a = sample_at(relative, times, t_a);
    const Vec2* b = sample_at(relative, times, t_b);
    out.net_osc_displacement = norm(*b - *a);
    out.responded = out.net_osc_displacement > std::max(5.0 * out.pre_rmse, 5.0);
    return out;
}

std::optional<std::pair<double, double>> oscillation_window(const FieldSchedule& schedule) {
    std::optional<std::pair<double, double>> win;
    for (const auto& seg : schedule.segments) {
        if (seg.kind != FieldKind::Oscillating) continue;
        if (win) throw data_error("schedule contains more than one oscillating segment");
        win = {seg.t_start, seg.t_end};
    }
    return win;
}

OscResponse detect_osc_response(const std::vector<Vec2>& relative,
                                const std::vector<double>& times,
                                const FieldSchedule& schedule) {
    const auto win = oscillation_window(schedule);
    if (!win) throw data_error("oscillation response: schedule has no oscillating segment");
    return detect_osc_response(relative, times, win->first, win->second);
}

SwimReport build_swim_report(const DisplacementSeries& swim,
                             const std::vector<Vec2>& mag_reference,
                             const std::vector<double>& times, double t_a, double t_b,
                             double body_length) {
    SwimReport rep;
    rep.relative = relative_translation(swim, mag_reference);
    rep.times = times;
    rep.osc_window_start = t_a;
    rep.osc_window_end = t_b;
    rep.body_length = body_length;

    const SpeedEstimate speed = swim_speed(rep.relative, times, t_a, t_b, body_length);
    rep.speed_um_s = speed.speed_um_s;
    rep.speed_bl_s = speed.speed_bl_s;

    const OscResponse osc = detect_osc_response(rep.relative, times, t_a, t_b);
    rep.pre_osc_rmse = osc.pre_rmse;
    rep.net_relative_displacement = osc.net_osc_displacement;
    rep.responded = osc.responded;
    rep.speed_endpoint_um_s = osc.net_osc_displacement / (t_b - t_a);

    const DirectionChange dc = direction_change(rep.relative, times, t_a, t_b);
    rep.direction_pre = dc.direction_pre;
    rep.direction_post = dc.direction_post;
    rep.direction_change = dc.change;
    rep.direction_pre_defined = dc.pre_defined;
    rep.direction_post_defined = dc.post_defined;
    return rep;
}

}  // namespace driftbench
