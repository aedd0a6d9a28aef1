#pragma once

#include <optional>
#include <string>
#include <vector>

#include "driftbench/driftest.hpp"
#include "driftbench/fieldgen.hpp"
#include "driftbench/geometry.hpp"

namespace driftbench {

struct SpeedEstimate {
    double vx = 0.0;        // um/s
    double vy = 0.0;        // um/s
    double speed_um_s = 0.0;
    double speed_bl_s = 0.0;
    double direction = 0.0;  // rad; 0 by convention when speed is 0
};

struct DirectionChange {
    double direction_pre = 0.0;   // rad
    double direction_post = 0.0;  // rad
    double change = 0.0;          // rad, wrapped to [0, pi]
    bool pre_defined = false;     // false when |velocity| < 0.05 um/s
    bool post_defined = false;
    double speed_pre = 0.0;       // um/s
    double speed_post = 0.0;      // um/s
};

struct OscResponse {
    double pre_rmse = 0.0;               // um, RMS of |relative| before the window
    double net_osc_displacement = 0.0;   // um across the window
    bool responded = false;
};

// Everything the isolation step reports for one swimmer.
struct SwimReport {
    std::vector<Vec2> relative;   // (swim - mag reference) per frame, um
    std::vector<double> times;    // s
    double pre_osc_rmse = 0.0;    // um
    double osc_window_start = 0.0;  // s
    double osc_window_end = 0.0;    // s
    double net_relative_displacement = 0.0;  // um over the window
    double speed_um_s = 0.0;            // window linear fit
    double speed_endpoint_um_s = 0.0;   // endpoint difference / window length
    double speed_bl_s = 0.0;
    double body_length = 0.0;     // um
    double direction_pre = 0.0;   // rad
    double direction_post = 0.0;  // rad
    double direction_change = 0.0;  // rad, [0, pi]
    bool direction_pre_defined = false;
    bool direction_post_defined = false;
    bool responded = false;
};

inline constexpr double kDefaultBodyLengthUm = 17.1;   // sum of the two sphere diameters
inline constexpr double kMinDirectionSpeedUmS = 0.05;
inline constexpr double kMinFitWindowS = 5.0;

// componentwise difference per frame; grids must match
std::vector<Vec2> relative_translation(const DisplacementSeries& swim,
                                       const std::vector<Vec2>& mag_reference);

// least-squares velocity of the series over [t_a, t_b] (window >= 5 s)
SpeedEstimate swim_speed(const std::vector<Vec2>& relative, const std::vector<double>& times,
                         double t_a, double t_b, double body_length);

// angle between the fitted velocity before the window and within it
DirectionChange direction_change(const std::vector<Vec2>& relative,
                                 const std::vector<double>& times, double t_a, double t_b);

OscResponse detect_osc_response(const std::vector<Vec2>& relative,
                                const std::vector<double>& times, double t_a, double t_b);
// window taken from the schedule's single oscillating segment
OscResponse detect_osc_response(const std::vector<Vec2>& relative,
                                const std::vector<double>& times,
                                const FieldSchedule& schedule);

// the schedule's oscillating window, or nullopt if absent; throws data_error
// when more than one oscillating segment exists
std::optional<std::pair<double, double>> oscillation_window(const FieldSchedule& schedule);

SwimReport build_swim_report(const DisplacementSeries& swim,
                             const std::vector<Vec2>& mag_reference,
                             const std::vector<double>& times, double t_a, double t_b,
                             double body_length);

}  // namespace driftbench
