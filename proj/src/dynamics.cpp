#include "driftbench/dynamics.hpp"

#include <array>
#include <cmath>

#include "driftbench/errors.hpp"
#include "driftbench/rng.hpp"
#include "driftbench/units.hpp"

namespace driftbench {

double BeadSpringState::body_axis_angle() const {
    const Vec2 d = bead_nonmag - bead_mag;
    return std::atan2(d.y, d.x);
}

double BeadSpringState::extension(double rest_length) const {
    return norm(bead_nonmag - bead_mag) - rest_length;
}

namespace {

Vec2 ambient_velocity(const FlowModel& flow, const Vec2& x, double t, double viscosity,
                      std::span<const DisturbanceSource> sources) {
    Vec2 v = flow_at(flow, x, t);
    for (const auto& s : sources) v += swimmer_disturbance(s.torque_z, s.pos, x, viscosity);
    return v;
}

struct MagDeriv {
    Vec2 v;
    double dtheta;
};

MagDeriv mag_derivative(const MagState& s, const FlowModel& flow, const FieldSchedule& schedule,
                        const GradientModel& gradient, double viscosity, double radius,
                        double moment, double t, std::span<const DisturbanceSource> sources) {
    MagDeriv d;
    d.v = ambient_velocity(flow, s.pos, t, viscosity, sources);
    if (!gradient.is_zero()) {
        const Vec2 f = gradient.dipole_force(moment, s.dipole_angle);
        d.v += (kMobilityScale / stokes_translation_drag(viscosity, radius)) * f;
    }
    const FieldSegment& seg = schedule.segment_at(t);
    d.dtheta = alignment_rate(moment, seg.amplitude, viscosity, radius) *
               std::sin(segment_angle(seg, t) - s.dipole_angle);
    return d;
}

struct KinematicContext {
    const FlowModel& flow;
    const FieldSchedule& schedule;
    const GradientModel& gradient;
    const ParticleSpec& spec;
    double viscosity;
    std::span<const DisturbanceSource> sources;
};

MagDeriv kinematic_derivative(const MagState& s, const KinematicContext& c, double t) {
    MagDeriv d = mag_derivative(s, c.flow, c.schedule, c.gradient, c.viscosity,
                                c.spec.radius_mag, c.spec.dipole_moment, t, c.sources);
    if (c.schedule.segment_at(t).kind == FieldKind::Oscillating && c.spec.model.swim_speed > 0) {
        const double dir = c.spec.model.swim_direction_mode == SwimDirectionMode::DipoleOffset
                               ? s.dipole_angle - c.spec.dipole_offset_angle
                               : c.spec.model.swim_direction_angle;
        d.v += c.spec.model.swim_speed * unit_from_angle(dir);
    }
    return d;
}

struct BeadSpringDeriv {
    Vec2 v1, v2;
    double dtheta;
    double torque_on_fluid;  // N*um, rotlet strength of the magnetic bead
};

// Oseen flow at distance vector d (um) from a point force f (N)
Vec2 oseen_velocity(const Vec2& f, const Vec2& d, double viscosity) {
    const double r = norm(d);
    const Vec2 rhat = (1.0 / r) * d;
    const double c = kMobilityScale / (8.0 * M_PI * viscosity * r);
    return c * (f + dot(f, rhat) * rhat);
}

BeadSpringDeriv beadspring_derivative(const BeadSpringState& s, const FlowModel& flow,
                                      const FieldSchedule& schedule, double viscosity,
                                      const ParticleSpec& spec, double t,
                                      std::span<const DisturbanceSource> sources) {
    const Linkage& lk = spec.linkage;
    const Vec2 d = s.bead_nonmag - s.bead_mag;
    const double r = norm(d);
    if (r < 0.5 * lk.rest_length)
        throw data_error("bead separation " + std::to_string(r) +
                         " um fell below half the rest length");
    const Vec2 e = (1.0 / r) * d;
    const Vec2 e_perp{-e.y, e.x};
    const double axis_angle = std::atan2(d.y, d.x);

    // linear spring along the axis, force in N (k is N/m, extension in um)
    const double ext = r - lk.rest_length;
    const Vec2 f_spring_on_mag = (lk.stiffness_k * ext * 1e-6) * e;

    // angular spring between dipole and body frame; torque pair in N*um
    const double psi = wrap_angle(s.dipole_angle - axis_angle - spec.dipole_offset_angle);
    const double torque_on_dipole = -lk.angular_stiffness_kappa * psi;
    const double torque_on_body = lk.angular_stiffness_kappa * psi;

    // couple realizing torque_on_body as opposite transverse forces
    const Vec2 f_couple_on_mag = (-torque_on_body / r) * e_perp;
    const Vec2 f_couple_on_nonmag = (torque_on_body / r) * e_perp;

    const FieldSegment& seg = schedule.segment_at(t);
    const double torque_mag = spec.dipole_moment * seg.amplitude * kTorqueNumPerFieldUnit *
                              std::sin(segment_angle(seg, t) - s.dipole_angle);

    const Vec2 f1 = f_spring_on_mag + f_couple_on_mag;
    const Vec2 f2 = -1.0 * f_spring_on_mag + f_couple_on_nonmag;

    BeadSpringDeriv out;
    out.torque_on_fluid = torque_mag + torque_on_dipole;
    out.v1 = ambient_velocity(flow, s.bead_mag, t, viscosity, sources) +
             velocity_from_force(1.0, viscosity, spec.radius_mag) * f1;
    out.v2 = ambient_velocity(flow, s.bead_nonmag, t, viscosity, sources) +
             velocity_from_force(1.0, viscosity, spec.radius_nonmag) * f2;
    out.dtheta = omega_from_torque(torque_mag + torque_on_dipole, viscosity, spec.radius_mag);

    if (spec.model.hydrodynamic_coupling_on) {
        // rotlet of the magnetic bead's torque felt by the partner bead,
        // plus Oseen coupling of each bead's force at the other bead
        out.v2 += swimmer_disturbance(out.torque_on_fluid, s.bead_mag, s.bead_nonmag, viscosity);
        out.v1 += oseen_velocity(f2, s.bead_mag - s.bead_nonmag, viscosity);
        out.v2 += oseen_velocity(f1, s.bead_nonmag - s.bead_mag, viscosity);
    }
    return out;
}

// classical RK4 over a fixed-size array state
template <std::size_t N, typename Deriv>
std::array<double, N> rk4(const std::array<double, N>& y, double t, double dt, Deriv&& f) {
    std::array<double, N> k1 = f(y, t);
    std::array<double, N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    std::array<double, N> k2 = f(tmp, t + 0.5 * dt);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    std::array<double, N> k3 = f(tmp, t + 0.5 * dt);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + dt * k3[i];
    std::array<double, N> k4 = f(tmp, t + dt);
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

}  // namespace

Vec2 step_nonmag(const Vec2& pos, const FlowModel& flow, double t, double dt, double viscosity,
                 std::span<const DisturbanceSource> sources) {
    auto f = [&](const std::array<double, 2>& y, double tt) {
        const Vec2 v = ambient_velocity(flow, {y[0], y[1]}, tt, viscosity, sources);
        return std::array<double, 2>{v.x, v.y};
    };
    const auto out = rk4<2>({pos.x, pos.y}, t, dt, f);
    return {out[0], out[1]};
}

MagState step_mag(const MagState& state, const FlowModel& flow, const FieldSchedule& schedule,
                  const GradientModel& gradient, double viscosity, double radius, double moment,
                  double t, double dt, std::span<const DisturbanceSource> sources) {
    auto f = [&](const std::array<double, 3>& y, double tt) {
        const MagDeriv d = mag_derivative({{y[0], y[1]}, y[2]}, flow, schedule, gradient,
                                          viscosity, radius, moment, tt, sources);
        return std::array<double, 3>{d.v.x, d.v.y, d.dtheta};
    };
    const auto out = rk4<3>({state.pos.x, state.pos.y, state.dipole_angle}, t, dt, f);
    return {{out[0], out[1]}, out[2]};
}

MagState step_swimmer_kinematic(const MagState& state, const FlowModel& flow,
                                const FieldSchedule& schedule, const GradientModel& gradient,
                                const ParticleSpec& spec, double viscosity, double t, double dt,
                                std::span<const DisturbanceSource> sources) {
    const KinematicContext c{flow, schedule, gradient, spec, viscosity, sources};
    auto f = [&](const std::array<double, 3>& y, double tt) {
        const MagDeriv d = kinematic_derivative({{y[0], y[1]}, y[2]}, c, tt);
        return std::array<double, 3>{d.v.x, d.v.y, d.dtheta};
    };
    const auto out = rk4<3>({state.pos.x, state.pos.y, state.dipole_angle}, t, dt, f);
    return {{out[0], out[1]}, out[2]};
}

BeadSpringState step_swimmer_beadspring(const BeadSpringState& state, const FlowModel& flow,
                                        const FieldSchedule& schedule, double viscosity,
                                        const ParticleSpec& spec, double t, double dt,
                                        std::span<const DisturbanceSource> sources) {
    auto f = [&](const std::array<double, 5>& y, double tt) {
        const BeadSpringState s{{y[0], y[1]}, {y[2], y[3]}, y[4]};
        const BeadSpringDeriv d =
            beadspring_derivative(s, flow, schedule, viscosity, spec, tt, sources);
        return std::array<double, 5>{d.v1.x, d.v1.y, d.v2.x, d.v2.y, d.dtheta};
    };
    const auto out = rk4<5>({state.bead_mag.x, state.bead_mag.y, state.bead_nonmag.x,
                             state.bead_nonmag.y, state.dipole_angle},
                            t, dt, f);
    return {{out[0], out[1]}, {out[2], out[3]}, out[4]};
}

double kinematic_swimmer_torque(const MagState& state, const FieldSchedule& schedule,
                                const ParticleSpec& spec, double t) {
    const FieldSegment& seg = schedule.segment_at(t);
    return spec.dipole_moment * seg.amplitude * kTorqueNumPerFieldUnit *
           std::sin(segment_angle(seg, t) - state.dipole_angle);
}

double beadspring_swimmer_torque(const BeadSpringState& state, const FieldSchedule& schedule,
                                 const ParticleSpec& spec, double t) {
    const FieldSegment& seg = schedule.segment_at(t);
    const double torque_mag = spec.dipole_moment * seg.amplitude * kTorqueNumPerFieldUnit *
                              std::sin(segment_angle(seg, t) - state.dipole_angle);
    const double psi =
        wrap_angle(state.dipole_angle - state.body_axis_angle() - spec.dipole_offset_angle);
    return torque_mag - spec.linkage.angular_stiffness_kappa * psi;
}

// ---------------------------------------------------------------------------
// whole-scene integration
// ---------------------------------------------------------------------------

namespace {

struct Layout {
    std::size_t offset;  // into the flat state vector
    std::size_t size;    // 2 nonmag, 3 mag/kinematic, 5 beadspring
};

class SceneSystem {
public:
    explicit SceneSystem(const Scene& scene) : scene_(scene) {
        std::size_t off = 0;
        for (const auto& p : scene.particles) {
            std::size_t sz = 2;
            if (p.kind == ParticleKind::MagFiducial) sz = 3;
            if (p.kind == ParticleKind::Swimmer)
                sz = p.model.kind == SwimmerModelKind::BeadSpring ? 5 : 3;
            layout_.push_back({off, sz});
            if (p.kind == ParticleKind::Swimmer) swimmers_.push_back(layout_.size() - 1);
            off += sz;
        }
        state_.resize(off);
        for (std::size_t i = 0; i < scene.particles.size(); ++i) {
            const auto& p = scene.particles[i];
            double* y = &state_[layout_[i].offset];
            y[0] = p.position0.x;
            y[1] = p.position0.y;
            if (layout_[i].size == 3) y[2] = p.dipole_angle0;
            if (layout_[i].size == 5) {
                const double axis0 = p.dipole_angle0 - p.dipole_offset_angle;
                const Vec2 b2 = p.position0 + p.linkage.rest_length * unit_from_angle(axis0);
                y[2] = b2.x;
                y[3] = b2.y;
                y[4] = p.dipole_angle0;
            }
        }
    }

    std::size_t dim() const { return state_.size(); }
    std::vector<double>& state() { return state_; }

    void derivative(const std::vector<double>& y, double t, std::vector<double>& dydt) const {
        sources_.clear();
        if (scene_.swimmer_disturbance_on) {
            for (std::size_t si : swimmers_) {
                const auto& p = scene_.particles[si];
                const double* ys = &y[layout_[si].offset];
                if (layout_[si].size == 5) {
                    const BeadSpringState s{{ys[0], ys[1]}, {ys[2], ys[3]}, ys[4]};
                    sources_.push_back(
                        {s.bead_mag, beadspring_swimmer_torque(s, scene_.schedule, p, t)});
                } else {
                    const MagState s{{ys[0], ys[1]}, ys[2]};
                    sources_.push_back(
                        {s.pos, kinematic_swimmer_torque(s, scene_.schedule, p, t)});
                }
            }
        }

        for (std::size_t i = 0; i < scene_.particles.size(); ++i) {
            const auto& p = scene_.particles[i];
            const double* yi = &y[layout_[i].offset];
            double* di = &dydt[layout_[i].offset];

            // a swimmer is not stirred by its own rotlet
            scratch_.clear();
            std::span<const DisturbanceSource> src(sources_);
            if (p.kind == ParticleKind::Swimmer && !sources_.empty()) {
                std::size_t self = 0;
                for (std::size_t k = 0; k < swimmers_.size(); ++k)
                    if (swimmers_[k] == i) self = k;
                for (std::size_t k = 0; k < sources_.size(); ++k)
                    if (k != self) scratch_.push_back(sources_[k]);
                src = scratch_;
            }

            try {
                switch (p.kind) {
                    case ParticleKind::NonMagFiducial: {
                        const Vec2 v = ambient_velocity(scene_.flow, {yi[0], yi[1]}, t,
                                                        scene_.viscosity, src);
                        di[0] = v.x;
                        di[1] = v.y;
                        break;
                    }
                    case ParticleKind::MagFiducial: {
                        const MagDeriv d = mag_derivative({{yi[0], yi[1]}, yi[2]}, scene_.flow,
                                                          scene_.schedule, scene_.gradient,
                                                          scene_.viscosity, p.radius,
                                                          p.dipole_moment, t, src);
                        di[0] = d.v.x;
                        di[1] = d.v.y;
                        di[2] = d.dtheta;
                        break;
                    }
                    case ParticleKind::Swimmer: {
                        if (layout_[i].size == 5) {
                            const BeadSpringState s{{yi[0], yi[1]}, {yi[2], yi[3]}, yi[4]};
                            const BeadSpringDeriv d = beadspring_derivative(
                                s, scene_.flow, scene_.schedule, scene_.viscosity, p, t, src);
                            di[0] = d.v1.x;
                            di[1] = d.v1.y;
                            di[2] = d.v2.x;
                            di[3] = d.v2.y;
                            di[4] = d.dtheta;
                        } else {
                            const KinematicContext c{scene_.flow, scene_.schedule,
                                                     scene_.gradient, p, scene_.viscosity, src};
                            const MagDeriv d = kinematic_derivative({{yi[0], yi[1]}, yi[2]}, c, t);
                            di[0] = d.v.x;
                            di[1] = d.v.y;
                            di[2] = d.dtheta;
                        }
                        break;
                    }
                }
            } catch (const data_error& e) {
                throw data_error("particle '" + p.id + "' at t=" + std::to_string(t) +
                                 " s: " + e.what());
            }
        }
    }

    void rk4_step(double t, double dt) {
        const std::size_t n = dim();
        k1_.resize(n); k2_.resize(n); k3_.resize(n); k4_.resize(n); tmp_.resize(n);
        derivative(state_, t, k1_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = state_[i] + 0.5 * dt * k1_[i];
        derivative(tmp_, t + 0.5 * dt, k2_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = state_[i] + 0.5 * dt * k2_[i];
        derivative(tmp_, t + 0.5 * dt, k3_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = state_[i] + dt * k3_[i];
        derivative(tmp_, t + dt, k4_);
        for (std::size_t i = 0; i < n; ++i)
            state_[i] += (dt / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

    void record(std::size_t frame, TrajectorySet& traj) const {
        for (std::size_t i = 0; i < scene_.particles.size(); ++i) {
            const auto& p = scene_.particles[i];
            const double* y = &state_[layout_[i].offset];
            Track& t = traj.tracks[i];
            t.pos[frame] = {y[0], y[1]};
            if (p.kind == ParticleKind::Swimmer) {
                if (layout_[i].size == 5) {
                    const BeadSpringState s{{y[0], y[1]}, {y[2], y[3]}, y[4]};
                    t.theta[frame] = s.body_axis_angle();
                } else {
                    t.theta[frame] = y[2] - p.dipole_offset_angle;
                }
            }
        }
    }

private:
    const Scene& scene_;
    std::vector<Layout> layout_;
    std::vector<std::size_t> swimmers_;
    std::vector<double> state_;
    mutable std::vector<DisturbanceSource> sources_, scratch_;
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace

TrajectorySet simulate(const Scene& scene) {
    scene.validate();

    const int n_frames = scene.n_frames();
    const int spf = scene.steps_per_frame();

    TrajectorySet traj;
    traj.times.resize(n_frames);
    for (int j = 0; j < n_frames; ++j) traj.times[j] = j / scene.frame_rate;
    for (const auto& p : scene.particles) {
        Track t;
        t.id = p.id;
        t.kind = p.kind;
        t.pos.assign(n_frames, Vec2{});
        if (p.kind == ParticleKind::Swimmer) t.theta.assign(n_frames, 0.0);
        traj.tracks.push_back(std::move(t));
    }

    SceneSystem sys(scene);
    sys.record(0, traj);
    long step = 0;
    for (int frame = 1; frame < n_frames; ++frame) {
        for (int k = 0; k < spf; ++k, ++step) {
            sys.rk4_step(step * scene.sim_dt, scene.sim_dt);
        }
        sys.record(frame, traj);
    }

    if (scene.position_noise_sigma > 0) {
        DetRng rng(scene.rng_seed);
        for (int j = 0; j < n_frames; ++j) {
            for (auto& t : traj.tracks) {
                const auto [gx, gy] = rng.gauss_pair();
                t.pos[j].x += scene.position_noise_sigma * gx;
                t.pos[j].y += scene.position_noise_sigma * gy;
            }
        }
    }
    return traj;
}

}  // namespace driftbench
