#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftbench/fieldgen.hpp"
#include "driftbench/geometry.hpp"

namespace driftbench {

enum class ParticleKind { NonMagFiducial, MagFiducial, Swimmer };

std::string to_string(ParticleKind kind);               // "nonmag" / "mag" / "swimmer"
ParticleKind particle_kind_from_string(const std::string& s);

enum class SwimmerModelKind { Kinematic, BeadSpring };
enum class SwimDirectionMode { DipoleOffset, FixedAngle };

struct SwimmerModelChoice {
    SwimmerModelKind kind = SwimmerModelKind::Kinematic;
    // Kinematic: thrust applied only while the active field segment oscillates
    double swim_speed = 0.0;  // um/s
    SwimDirectionMode swim_direction_mode = SwimDirectionMode::DipoleOffset;
    double swim_direction_angle = 0.0;  // rad, FixedAngle mode only
    // BeadSpring
    bool hydrodynamic_coupling_on = false;
};

struct Linkage {
    double stiffness_k = 1e-6;            // N/m
    double rest_length = 8.75;            // um
    double angular_stiffness_kappa = 5e-11;  // N*um/rad
};

struct ParticleSpec {
    std::string id;
    ParticleKind kind = ParticleKind::NonMagFiducial;
    Vec2 position0;  // um

    // fiducials use `radius`; swimmers carry one per bead
    double radius = 3.4;         // um (default: non-magnetic sphere)
    double radius_mag = 5.15;    // um, swimmer magnetic bead
    double radius_nonmag = 3.4;  // um, swimmer non-magnetic bead

    double dipole_moment = 0.02;      // A*um^2, magnetic kinds
    double dipole_angle0 = 0.0;       // rad
    double dipole_offset_angle = 0.0; // rad, swimmer: angle from body axis to dipole

    Linkage linkage;                 // swimmer only
    SwimmerModelChoice model;        // swimmer only

    void validate() const;
};

enum class FlowKind { Uniform, LinearShear, Vortex };

// Background flow evaluated anywhere in the plane. Vortex excludes a 1 um
// core around its center from the valid domain.
struct FlowModel {
    FlowKind kind = FlowKind::Uniform;
    Vec2 velocity;           // Uniform / LinearShear base velocity, um/s
    double gradient[2][2] = {{0, 0}, {0, 0}};  // LinearShear dv_i/dx_j, 1/s
    Vec2 reference_point;    // LinearShear
    Vec2 center;             // Vortex, um
    double strength = 0.0;   // Vortex circulation, um^2/s

    void validate() const;
};

inline constexpr double kVortexCoreRadiusUm = 1.0;
inline constexpr double kRotletCoreRadiusUm = 1.0;

Vec2 flow_at(const FlowModel& flow, const Vec2& x, double t);

// Stokes rotlet of a point torque (N*um) at swimmer_pos, evaluated at x.
// Valid for |x - swimmer_pos| >= 1 um.
Vec2 swimmer_disturbance(double torque_z_num, const Vec2& swimmer_pos, const Vec2& x,
                         double viscosity);

// Uniform dipole-force field gradient dB_i/dx_j in mT/um.
struct GradientModel {
    double grad_b[2][2] = {{0, 0}, {0, 0}};

    bool is_zero() const;
    void validate() const;
    // force (N) on a dipole of moment m (A*um^2) pointing along dipole_angle
    Vec2 dipole_force(double moment_aum2, double dipole_angle) const;
};

struct Scene {
    std::vector<ParticleSpec> particles;
    FlowModel flow;
    GradientModel gradient;
    FieldSchedule schedule;
    double viscosity = 1.5e-3;          // Pa*s
    double duration = 80.0;             // s
    double frame_rate = 20.0;           // Hz
    double sim_dt = 1e-3;               // s
    double position_noise_sigma = 0.5;  // um, applied at frame sampling only
    std::uint64_t rng_seed = 0;
    bool swimmer_disturbance_on = false;

    void validate() const;
    int steps_per_frame() const;
    int n_frames() const;  // inclusive of t=0 and t=duration
};

// Strict JSON scene file: unknown keys rejected, diagnostics carry the
// offending field path. Lengths in um, times in s, field in mT.
Scene load_scene(const std::string& path);
Scene parse_scene_json(const std::string& text, const std::string& origin);
std::string scene_to_json(const Scene& scene);  // round-trip emit

}  // namespace driftbench
