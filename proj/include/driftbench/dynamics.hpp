#pragma once

#include <span>
#include <vector>

#include "driftbench/fieldgen.hpp"
#include "driftbench/geometry.hpp"
#include "driftbench/scene.hpp"
#include "driftbench/trajectory.hpp"

namespace driftbench {

// A torque-carrying swimmer whose rotlet stirs the surrounding fluid.
struct DisturbanceSource {
    Vec2 pos;          // um
    double torque_z;   // N*um
};

struct MagState {
    Vec2 pos;
    double dipole_angle = 0.0;
};

struct BeadSpringState {
    Vec2 bead_mag;     // large ferromagnetic bead (the tracked center)
    Vec2 bead_nonmag;
    double dipole_angle = 0.0;

    double body_axis_angle() const;  // from magnetic toward non-magnetic bead
    double extension(double rest_length) const;
};

// Overdamped single-step integrators (one RK4 step of length dt starting at
// time t). Positional measurement noise is a sampling-layer concern and never
// enters these.
Vec2 step_nonmag(const Vec2& pos, const FlowModel& flow, double t, double dt,
                 double viscosity = 0.0,
                 std::span<const DisturbanceSource> sources = {});

MagState step_mag(const MagState& state, const FlowModel& flow, const FieldSchedule& schedule,
                  const GradientModel& gradient, double viscosity, double radius, double moment,
                  double t, double dt, std::span<const DisturbanceSource> sources = {});

MagState step_swimmer_kinematic(const MagState& state, const FlowModel& flow,
                                const FieldSchedule& schedule, const GradientModel& gradient,
                                const ParticleSpec& spec, double viscosity, double t, double dt,
                                std::span<const DisturbanceSource> sources = {});

BeadSpringState step_swimmer_beadspring(const BeadSpringState& state, const FlowModel& flow,
                                        const FieldSchedule& schedule, double viscosity,
                                        const ParticleSpec& spec, double t, double dt,
                                        std::span<const DisturbanceSource> sources = {});

// torque (N*um) currently exerted on the fluid by a swimmer, i.e. the rotlet
// strength used for its disturbance flow
double kinematic_swimmer_torque(const MagState& state, const FieldSchedule& schedule,
                                const ParticleSpec& spec, double t);
double beadspring_swimmer_torque(const BeadSpringState& state, const FieldSchedule& schedule,
                                 const ParticleSpec& spec, double t);

// Integrate the whole scene with fixed-step RK4 at sim_dt, sample every
// frame, then add i.i.d. Gaussian measurement noise (sigma =
// position_noise_sigma) to the sampled positions only. Bit-for-bit
// deterministic for identical scenes.
TrajectorySet simulate(const Scene& scene);

}  // namespace driftbench
