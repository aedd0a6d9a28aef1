#pragma once

#include <limits>
#include <string>
#include <vector>

#include "driftbench/geometry.hpp"
#include "driftbench/scene.hpp"

namespace driftbench {

// One particle's sampled track on the shared frame grid. Missing frames
// (possible in externally produced files) are NaN.
struct Track {
    std::string id;
    ParticleKind kind = ParticleKind::NonMagFiducial;
    std::vector<Vec2> pos;      // um, indexed by frame
    std::vector<double> theta;  // rad, swimmers only (empty otherwise)

    bool complete() const;
};

// Per-particle time series of positions on a uniform frame grid; the
// interchange format between the simulator and the analyzer.
struct TrajectorySet {
    std::vector<double> times;  // s, uniform spacing
    std::vector<Track> tracks;

    int n_frames() const { return static_cast<int>(times.size()); }
    double frame_interval() const;
    const Track* find(const std::string& id) const;
    void validate() const;  // uniform grid, consistent track lengths
};

// CSV: header `frame,time_s,particle_id,kind,x_um,y_um,theta_rad`,
// theta empty except for swimmers, rows sorted by (frame, particle_id),
// full-precision numerals.
void write_trajectories_csv(const TrajectorySet& traj, const std::string& path);
TrajectorySet read_trajectories_csv(const std::string& path);

inline constexpr double kMissingSample = std::numeric_limits<double>::quiet_NaN();

}  // namespace driftbench
