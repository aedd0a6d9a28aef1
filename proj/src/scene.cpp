#include "driftbench/scene.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "driftbench/errors.hpp"
#include "driftbench/units.hpp"

namespace driftbench {

using nlohmann::json;

std::string to_string(ParticleKind kind) {
    switch (kind) {
        case ParticleKind::NonMagFiducial: return "nonmag";
        case ParticleKind::MagFiducial: return "mag";
        case ParticleKind::Swimmer: return "swimmer";
    }
    return "nonmag";
}

ParticleKind particle_kind_from_string(const std::string& s) {
    if (s == "nonmag") return ParticleKind::NonMagFiducial;
    if (s == "mag") return ParticleKind::MagFiducial;
    if (s == "swimmer") return ParticleKind::Swimmer;
    throw input_error("unknown particle kind '" + s + "'");
}

void ParticleSpec::validate() const {
    if (id.empty()) throw input_error("particle: id must be non-empty");
    switch (kind) {
        case ParticleKind::NonMagFiducial:
            if (!(radius > 0)) throw input_error("particle '" + id + "': radius must be positive");
            break;
        case ParticleKind::MagFiducial:
            if (!(radius > 0)) throw input_error("particle '" + id + "': radius must be positive");
            if (!(dipole_moment > 0))
                throw input_error("particle '" + id + "': dipole_moment must be positive");
            break;
        case ParticleKind::Swimmer:
            if (!(radius_mag > 0) || !(radius_nonmag > 0))
                throw input_error("particle '" + id + "': bead radii must be positive");
            if (!(dipole_moment > 0))
                throw input_error("particle '" + id + "': dipole_moment must be positive");
            if (!(linkage.stiffness_k > 0) || !(linkage.rest_length > 0) ||
                !(linkage.angular_stiffness_kappa > 0))
                throw input_error("particle '" + id + "': linkage parameters must be positive");
            if (model.kind == SwimmerModelKind::Kinematic && model.swim_speed < 0)
                throw input_error("particle '" + id + "': swim_speed must be >= 0");
            break;
    }
}

void FlowModel::validate() const {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!std::isfinite(gradient[i][j])) throw input_error("flow: non-finite gradient");
    if (!std::isfinite(velocity.x) || !std::isfinite(velocity.y))
        throw input_error("flow: non-finite velocity");
}

Vec2 flow_at(const FlowModel& flow, const Vec2& x, double t) {
    (void)t;  // all supplied models are steady
    switch (flow.kind) {
        case FlowKind::Uniform:
            return flow.velocity;
        case FlowKind::LinearShear: {
            const Vec2 d = x - flow.reference_point;
            return {flow.velocity.x + flow.gradient[0][0] * d.x + flow.gradient[0][1] * d.y,
                    flow.velocity.y + flow.gradient[1][0] * d.x + flow.gradient[1][1] * d.y};
        }
        case FlowKind::Vortex: {
            const Vec2 d = x - flow.center;
            const double r2 = norm2(d);
            if (r2 < kVortexCoreRadiusUm * kVortexCoreRadiusUm)
                throw data_error("flow: point within 1 um of vortex center");
            const double c = flow.strength / (2.0 * M_PI * r2);
            return {-c * d.y, c * d.x};
        }
    }
    return {};
}

Vec2 swimmer_disturbance(double torque_z_num, const Vec2& swimmer_pos, const Vec2& x,
                         double viscosity) {
    const Vec2 d = x - swimmer_pos;
    const double r2 = norm2(d);
    if (r2 < kRotletCoreRadiusUm * kRotletCoreRadiusUm)
        throw data_error("swimmer disturbance: evaluation point within 1 um of swimmer");
    const double r = std::sqrt(r2);
    // u = T/(8 pi eta r^3) * (-dy, dx); magnitude decays as 1/r^2
    const double c = torque_z_num * kMobilityScale / (8.0 * M_PI * viscosity * r2 * r);
    return {-c * d.y, c * d.x};
}

bool GradientModel::is_zero() const {
    return grad_b[0][0] == 0 && grad_b[0][1] == 0 && grad_b[1][0] == 0 && grad_b[1][1] == 0;
}

void GradientModel::validate() const {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!std::isfinite(grad_b[i][j]))
                throw input_error("gradient: non-finite grad_b entry");
}

Vec2 GradientModel::dipole_force(double moment_aum2, double dipole_angle) const {
    // F_i = sum_j m_j dB_i/dx_j, m along the dipole direction
    const Vec2 m = moment_aum2 * unit_from_angle(dipole_angle);
    return {(m.x * grad_b[0][0] + m.y * grad_b[0][1]) * kForceNPerGradUnit,
            (m.x * grad_b[1][0] + m.y * grad_b[1][1]) * kForceNPerGradUnit};
}

void Scene::validate() const {
    if (particles.empty()) throw input_error("scene: no particles");
    std::set<std::string> ids;
    for (const auto& p : particles) {
        p.validate();
        if (!ids.insert(p.id).second)
            throw input_error("scene: duplicate particle id '" + p.id + "'");
    }
    flow.validate();
    gradient.validate();
    schedule.validate();
    if (!(viscosity > 0)) throw input_error("scene: viscosity must be positive");
    if (!(duration > 0)) throw input_error("scene: duration must be positive");
    if (!(frame_rate > 0)) throw input_error("scene: frame_rate must be positive");
    if (!(sim_dt > 0)) throw input_error("scene: sim_dt must be positive");
    if (position_noise_sigma < 0) throw input_error("scene: position_noise_sigma must be >= 0");

    const double frame_interval = 1.0 / frame_rate;
    const double steps = frame_interval / sim_dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
        throw input_error("scene: sim_dt must divide the frame interval exactly");
    const double frames = duration * frame_rate;
    if (std::abs(frames - std::round(frames)) > 1e-6)
        throw input_error("scene: duration must be a whole number of frames");
    if (schedule.span_start() > 0.0 || schedule.span_end() < duration)
        throw input_error("scene: field schedule must cover [0, duration]");
}

int Scene::steps_per_frame() const {
    return static_cast<int>(std::lround(1.0 / (frame_rate * sim_dt)));
}

int Scene::n_frames() const { return static_cast<int>(std::lround(duration * frame_rate)) + 1; }

// ---------------------------------------------------------------------------
// JSON parsing with strict unknown-key rejection and field-path diagnostics
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw input_error("scene file: " + path + ": " + what);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    if (!j.is_object()) fail(path, "expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
    }
}

const json& require(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing required key");
    return *it;
}

double get_num(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double num_field(const json& j, const char* key, const std::string& path) {
    return get_num(require(j, key, path), path + "." + key);
}

double num_field_or(const json& j, const char* key, const std::string& path, double fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : get_num(*it, path + "." + key);
}

Vec2 get_vec2(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
    return {get_num(j[0], path + "[0]"), get_num(j[1], path + "[1]")};
}

void get_mat2(const json& j, const std::string& path, double out[2][2]) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected a 2x2 matrix");
    for (int i = 0; i < 2; ++i) {
        const json& row = j[i];
        const std::string rp = path + "[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != 2) fail(rp, "expected a row of 2 numbers");
        for (int k = 0; k < 2; ++k) out[i][k] = get_num(row[k], rp + "[" + std::to_string(k) + "]");
    }
}

std::string str_field(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

FieldSegment parse_segment(const json& j, const std::string& path) {
    FieldSegment seg;
    const std::string kind = str_field(j, "kind", path);
    if (kind == "constant") {
        seg.kind = FieldKind::Constant;
        check_keys(j, path, {"kind", "t_start", "t_end", "amplitude", "base_angle"});
    } else if (kind == "rotating") {
        seg.kind = FieldKind::Rotating;
        check_keys(j, path, {"kind", "t_start", "t_end", "amplitude", "base_angle", "frequency",
                             "rotation_sign", "phase"});
        seg.frequency = num_field(j, "frequency", path);
        const double sign = num_field_or(j, "rotation_sign", path, 1.0);
        if (sign != 1.0 && sign != -1.0) fail(path + ".rotation_sign", "must be +1 or -1");
        seg.rotation_sign = static_cast<int>(sign);
        seg.phase = num_field_or(j, "phase", path, 0.0);
    } else if (kind == "oscillating") {
        seg.kind = FieldKind::Oscillating;
        check_keys(j, path, {"kind", "t_start", "t_end", "amplitude", "base_angle", "frequency",
                             "angular_amplitude", "phase"});
        seg.frequency = num_field(j, "frequency", path);
        seg.angular_amplitude = num_field(j, "angular_amplitude", path);
        seg.phase = num_field_or(j, "phase", path, 0.0);
    } else {
        fail(path + ".kind", "must be constant, rotating, or oscillating");
    }
    seg.t_start = num_field(j, "t_start", path);
    seg.t_end = num_field(j, "t_end", path);
    seg.amplitude = num_field_or(j, "amplitude", path, 5.0);
    seg.base_angle = num_field_or(j, "base_angle", path, 0.0);
    return seg;
}

FlowModel parse_flow(const json& j, const std::string& path) {
    FlowModel f;
    const std::string kind = str_field(j, "kind", path);
    if (kind == "uniform") {
        f.kind = FlowKind::Uniform;
        check_keys(j, path, {"kind", "velocity"});
        f.velocity = get_vec2(require(j, "velocity", path), path + ".velocity");
    } else if (kind == "linear_shear") {
        f.kind = FlowKind::LinearShear;
        check_keys(j, path, {"kind", "velocity", "gradient", "reference_point"});
        f.velocity = get_vec2(require(j, "velocity", path), path + ".velocity");
        get_mat2(require(j, "gradient", path), path + ".gradient", f.gradient);
        f.reference_point =
            get_vec2(require(j, "reference_point", path), path + ".reference_point");
    } else if (kind == "vortex") {
        f.kind = FlowKind::Vortex;
        check_keys(j, path, {"kind", "center", "strength"});
        f.center = get_vec2(require(j, "center", path), path + ".center");
        f.strength = num_field(j, "strength", path);
    } else {
        fail(path + ".kind", "must be uniform, linear_shear, or vortex");
    }
    return f;
}

SwimmerModelChoice parse_model(const json& j, const std::string& path) {
    SwimmerModelChoice m;
    const std::string kind = str_field(j, "kind", path);
    if (kind == "kinematic") {
        m.kind = SwimmerModelKind::Kinematic;
        check_keys(j, path, {"kind", "swim_speed", "swim_direction_mode", "swim_direction_angle"});
        m.swim_speed = num_field(j, "swim_speed", path);
        std::string mode = "dipole_offset";
        if (j.contains("swim_direction_mode")) mode = str_field(j, "swim_direction_mode", path);
        if (mode == "dipole_offset") {
            m.swim_direction_mode = SwimDirectionMode::DipoleOffset;
        } else if (mode == "fixed_angle") {
            m.swim_direction_mode = SwimDirectionMode::FixedAngle;
        } else {
            fail(path + ".swim_direction_mode", "must be dipole_offset or fixed_angle");
        }
        m.swim_direction_angle = num_field_or(j, "swim_direction_angle", path, 0.0);
    } else if (kind == "bead_spring") {
        m.kind = SwimmerModelKind::BeadSpring;
        check_keys(j, path, {"kind", "hydrodynamic_coupling_on"});
        auto it = j.find("hydrodynamic_coupling_on");
        if (it != j.end()) {
            if (!it->is_boolean()) fail(path + ".hydrodynamic_coupling_on", "expected a bool");
            m.hydrodynamic_coupling_on = it->get<bool>();
        }
    } else {
        fail(path + ".kind", "must be kinematic or bead_spring");
    }
    return m;
}

ParticleSpec parse_particle(const json& j, const std::string& path) {
    ParticleSpec p;
    p.id = str_field(j, "id", path);
    p.kind = particle_kind_from_string(str_field(j, "kind", path));
    p.position0 = get_vec2(require(j, "position0", path), path + ".position0");
    switch (p.kind) {
        case ParticleKind::NonMagFiducial:
            check_keys(j, path, {"id", "kind", "position0", "radius"});
            p.radius = num_field_or(j, "radius", path, 3.4);
            break;
        case ParticleKind::MagFiducial:
            check_keys(j, path,
                       {"id", "kind", "position0", "radius", "dipole_moment", "dipole_angle0"});
            p.radius = num_field_or(j, "radius", path, 5.15);
            p.dipole_moment = num_field_or(j, "dipole_moment", path, 0.02);
            p.dipole_angle0 = num_field_or(j, "dipole_angle0", path, 0.0);
            break;
        case ParticleKind::Swimmer: {
            check_keys(j, path,
                       {"id", "kind", "position0", "radius_mag", "radius_nonmag", "dipole_moment",
                        "dipole_angle0", "dipole_offset_angle", "linkage", "model"});
            p.radius_mag = num_field_or(j, "radius_mag", path, 5.15);
            p.radius_nonmag = num_field_or(j, "radius_nonmag", path, 3.4);
            p.dipole_moment = num_field_or(j, "dipole_moment", path, 0.02);
            p.dipole_angle0 = num_field_or(j, "dipole_angle0", path, 0.0);
            p.dipole_offset_angle = num_field_or(j, "dipole_offset_angle", path, 0.0);
            p.linkage.rest_length = p.radius_mag + p.radius_nonmag + 0.2;
            if (j.contains("linkage")) {
                const json& l = j["linkage"];
                const std::string lp = path + ".linkage";
                check_keys(l, lp, {"stiffness_k", "rest_length", "angular_stiffness_kappa"});
                p.linkage.stiffness_k = num_field_or(l, "stiffness_k", lp, p.linkage.stiffness_k);
                p.linkage.rest_length = num_field_or(l, "rest_length", lp, p.linkage.rest_length);
                p.linkage.angular_stiffness_kappa =
                    num_field_or(l, "angular_stiffness_kappa", lp,
                                 p.linkage.angular_stiffness_kappa);
            }
            if (j.contains("model")) p.model = parse_model(j["model"], path + ".model");
            break;
        }
    }
    return p;
}

json segment_to_json(const FieldSegment& s) {
    json j;
    j["t_start"] = s.t_start;
    j["t_end"] = s.t_end;
    j["amplitude"] = s.amplitude;
    j["base_angle"] = s.base_angle;
    switch (s.kind) {
        case FieldKind::Constant:
            j["kind"] = "constant";
            break;
        case FieldKind::Rotating:
            j["kind"] = "rotating";
            j["frequency"] = s.frequency;
            j["rotation_sign"] = s.rotation_sign;
            j["phase"] = s.phase;
            break;
        case FieldKind::Oscillating:
            j["kind"] = "oscillating";
            j["frequency"] = s.frequency;
            j["angular_amplitude"] = s.angular_amplitude;
            j["phase"] = s.phase;
            break;
    }
    return j;
}

}  // namespace

Scene parse_scene_json(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw input_error("scene file '" + origin + "': malformed JSON: " + e.what());
    }

    const std::string root = "$";
    check_keys(j, root,
               {"particles", "flow", "gradient", "schedule", "viscosity", "duration",
                "frame_rate", "sim_dt", "position_noise_sigma", "rng_seed",
                "swimmer_disturbance_on"});

    Scene s;
    const json& parts = require(j, "particles", root);
    if (!parts.is_array() || parts.empty()) fail(root + ".particles", "expected a non-empty array");
    for (std::size_t i = 0; i < parts.size(); ++i)
        s.particles.push_back(
            parse_particle(parts[i], root + ".particles[" + std::to_string(i) + "]"));

    s.flow = parse_flow(require(j, "flow", root), root + ".flow");

    if (j.contains("gradient")) {
        const json& g = j["gradient"];
        check_keys(g, root + ".gradient", {"grad_b"});
        get_mat2(require(g, "grad_b", root + ".gradient"), root + ".gradient.grad_b", s.gradient.grad_b);
    }

    const json& sched = require(j, "schedule", root);
    if (!sched.is_array() || sched.empty()) fail(root + ".schedule", "expected a non-empty array");
    for (std::size_t i = 0; i < sched.size(); ++i)
        s.schedule.segments.push_back(
            parse_segment(sched[i], root + ".schedule[" + std::to_string(i) + "]"));

    s.duration = num_field(j, "duration", root);
    s.viscosity = num_field_or(j, "viscosity", root, 1.5e-3);
    s.frame_rate = num_field_or(j, "frame_rate", root, 20.0);
    s.sim_dt = num_field_or(j, "sim_dt", root, 1e-3);
    s.position_noise_sigma = num_field_or(j, "position_noise_sigma", root, 0.5);
    if (j.contains("rng_seed")) {
        const json& v = j["rng_seed"];
        if (!v.is_number_integer() && !v.is_number_unsigned())
            fail(root + ".rng_seed", "expected an integer");
        s.rng_seed = v.get<std::uint64_t>();
    }
    if (j.contains("swimmer_disturbance_on")) {
        const json& v = j["swimmer_disturbance_on"];
        if (!v.is_boolean()) fail(root + ".swimmer_disturbance_on", "expected a bool");
        s.swimmer_disturbance_on = v.get<bool>();
    }

    s.validate();
    return s;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open scene file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene_json(buf.str(), path);
}

std::string scene_to_json(const Scene& scene) {
    json j;
    json parts = json::array();
    for (const auto& p : scene.particles) {
        json pj;
        pj["id"] = p.id;
        pj["kind"] = to_string(p.kind);
        pj["position0"] = {p.position0.x, p.position0.y};
        switch (p.kind) {
            case ParticleKind::NonMagFiducial:
                pj["radius"] = p.radius;
                break;
            case ParticleKind::MagFiducial:
                pj["radius"] = p.radius;
                pj["dipole_moment"] = p.dipole_moment;
                pj["dipole_angle0"] = p.dipole_angle0;
                break;
            case ParticleKind::Swimmer: {
                pj["radius_mag"] = p.radius_mag;
                pj["radius_nonmag"] = p.radius_nonmag;
                pj["dipole_moment"] = p.dipole_moment;
                pj["dipole_angle0"] = p.dipole_angle0;
                pj["dipole_offset_angle"] = p.dipole_offset_angle;
                pj["linkage"] = {{"stiffness_k", p.linkage.stiffness_k},
                                 {"rest_length", p.linkage.rest_length},
                                 {"angular_stiffness_kappa", p.linkage.angular_stiffness_kappa}};
                json mj;
                if (p.model.kind == SwimmerModelKind::Kinematic) {
                    mj["kind"] = "kinematic";
                    mj["swim_speed"] = p.model.swim_speed;
                    mj["swim_direction_mode"] =
                        p.model.swim_direction_mode == SwimDirectionMode::DipoleOffset
                            ? "dipole_offset"
                            : "fixed_angle";
                    if (p.model.swim_direction_mode == SwimDirectionMode::FixedAngle)
                        mj["swim_direction_angle"] = p.model.swim_direction_angle;
                } else {
                    mj["kind"] = "bead_spring";
                    mj["hydrodynamic_coupling_on"] = p.model.hydrodynamic_coupling_on;
                }
                pj["model"] = mj;
                break;
            }
        }
        parts.push_back(pj);
    }
    j["particles"] = parts;

    json fj;
    switch (scene.flow.kind) {
        case FlowKind::Uniform:
            fj["kind"] = "uniform";
            fj["velocity"] = {scene.flow.velocity.x, scene.flow.velocity.y};
            break;
        case FlowKind::LinearShear:
            fj["kind"] = "linear_shear";
            fj["velocity"] = {scene.flow.velocity.x, scene.flow.velocity.y};
            fj["gradient"] = {{scene.flow.gradient[0][0], scene.flow.gradient[0][1]},
                              {scene.flow.gradient[1][0], scene.flow.gradient[1][1]}};
            fj["reference_point"] = {scene.flow.reference_point.x, scene.flow.reference_point.y};
            break;
        case FlowKind::Vortex:
            fj["kind"] = "vortex";
            fj["center"] = {scene.flow.center.x, scene.flow.center.y};
            fj["strength"] = scene.flow.strength;
            break;
    }
    j["flow"] = fj;

    j["gradient"] = {{"grad_b",
                      {{scene.gradient.grad_b[0][0], scene.gradient.grad_b[0][1]},
                       {scene.gradient.grad_b[1][0], scene.gradient.grad_b[1][1]}}}};

    json sched = json::array();
    for (const auto& seg : scene.schedule.segments) sched.push_back(segment_to_json(seg));
    j["schedule"] = sched;

    j["viscosity"] = scene.viscosity;
    j["duration"] = scene.duration;
    j["frame_rate"] = scene.frame_rate;
    j["sim_dt"] = scene.sim_dt;
    j["position_noise_sigma"] = scene.position_noise_sigma;
    j["rng_seed"] = scene.rng_seed;
    j["swimmer_disturbance_on"] = scene.swimmer_disturbance_on;

    return j.dump(2) + "\n";
}

}  // namespace driftbench
