#include "driftbench/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "driftbench/errors.hpp"

namespace driftbench {

bool Track::complete() const {
    for (const auto& p : pos)
        if (std::isnan(p.x) || std::isnan(p.y)) return false;
    return true;
}

double TrajectorySet::frame_interval() const {
    if (times.size() < 2) throw data_error("trajectory set: need at least 2 frames");
    return times[1] - times[0];
}

const Track* TrajectorySet::find(const std::string& id) const {
    for (const auto& t : tracks)
        if (t.id == id) return &t;
    return nullptr;
}

void TrajectorySet::validate() const {
    if (times.empty()) throw data_error("trajectory set: empty frame grid");
    if (times.size() >= 2) {
        const double dt = times[1] - times[0];
        if (!(dt > 0)) throw data_error("trajectory set: non-increasing frame times");
        for (std::size_t j = 1; j < times.size(); ++j) {
            if (std::abs((times[j] - times[j - 1]) - dt) > 1e-9 * std::max(1.0, dt))
                throw data_error("trajectory set: inconsistent frame grid spacing at frame " +
                                 std::to_string(j));
        }
    }
    for (const auto& t : tracks) {
        if (t.pos.size() != times.size())
            throw data_error("trajectory set: track '" + t.id + "' length mismatch");
        if (!t.theta.empty() && t.theta.size() != times.size())
            throw data_error("trajectory set: track '" + t.id + "' theta length mismatch");
    }
}

void write_trajectories_csv(const TrajectorySet& traj, const std::string& path) {
    traj.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot open '" + path + "' for writing");

    // stable row order: frame-major, then particle id
    std::vector<const Track*> order;
    order.reserve(traj.tracks.size());
    for (const auto& t : traj.tracks) order.push_back(&t);
    std::sort(order.begin(), order.end(),
              [](const Track* a, const Track* b) { return a->id < b->id; });

    out << "frame,time_s,particle_id,kind,x_um,y_um,theta_rad\n";
    char buf[256];
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        for (const Track* t : order) {
            const Vec2& p = t->pos[j];
            if (std::isnan(p.x)) continue;  // absent in this frame
            int len = std::snprintf(buf, sizeof(buf), "%zu,%.17g,%s,%s,%.17g,%.17g,", j,
                                    traj.times[j], t->id.c_str(), to_string(t->kind).c_str(), p.x,
                                    p.y);
            out.write(buf, len);
            if (!t->theta.empty()) {
                len = std::snprintf(buf, sizeof(buf), "%.17g", t->theta[j]);
                out.write(buf, len);
            }
            out.put('\n');
        }
    }
    if (!out) throw input_error("write failed for '" + path + "'");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, const std::string& what, std::size_t lineno) {
    try {
        std::size_t n = 0;
        const double v = std::stod(s, &n);
        if (n != s.size()) throw std::invalid_argument("trailing garbage");
        return v;
    } catch (const std::exception&) {
        throw input_error("trajectory csv line " + std::to_string(lineno) + ": bad " + what +
                          " '" + s + "'");
    }
}

}  // namespace

TrajectorySet read_trajectories_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open trajectory file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw input_error("trajectory file '" + path + "' is empty");
    if (split_csv_line(line) !=
        std::vector<std::string>{"frame", "time_s", "particle_id", "kind", "x_um", "y_um",
                                 "theta_rad"})
        throw input_error("trajectory file '" + path + "': unexpected header");

    struct Row {
        long frame;
        double time, x, y, theta;
        bool has_theta;
        ParticleKind kind;
    };
    std::map<std::string, std::vector<Row>> by_id;
    std::vector<std::string> id_order;
    long max_frame = -1;
    std::map<long, double> frame_times;

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 7)
            throw input_error("trajectory csv line " + std::to_string(lineno) +
                              ": expected 7 fields, got " + std::to_string(f.size()));
        Row r;
        r.frame = static_cast<long>(parse_double(f[0], "frame", lineno));
        r.time = parse_double(f[1], "time", lineno);
        const std::string& id = f[2];
        r.kind = particle_kind_from_string(f[3]);
        r.x = parse_double(f[4], "x", lineno);
        r.y = parse_double(f[5], "y", lineno);
        r.has_theta = !f[6].empty();
        r.theta = r.has_theta ? parse_double(f[6], "theta", lineno) : kMissingSample;
        if (r.frame < 0)
            throw input_error("trajectory csv line " + std::to_string(lineno) + ": negative frame");

        auto [it, inserted] = by_id.try_emplace(id);
        if (inserted) id_order.push_back(id);
        for (const Row& prev : it->second) {
            if (prev.frame == r.frame)
                throw data_error("trajectory file: duplicate particle_id '" + id + "' in frame " +
                                 std::to_string(r.frame));
        }
        it->second.push_back(r);
        max_frame = std::max(max_frame, r.frame);
        auto [ft, fresh] = frame_times.try_emplace(r.frame, r.time);
        if (!fresh && std::abs(ft->second - r.time) > 1e-9)
            throw data_error("trajectory file: conflicting times for frame " +
                             std::to_string(r.frame));
    }
    if (max_frame < 0) throw input_error("trajectory file '" + path + "' has no data rows");

    TrajectorySet traj;
    const std::size_t n = static_cast<std::size_t>(max_frame) + 1;
    traj.times.resize(n);
    // fill the grid; every frame index must have a recorded time via some row
    for (std::size_t j = 0; j < n; ++j) {
        auto it = frame_times.find(static_cast<long>(j));
        if (it == frame_times.end())
            throw data_error("trajectory file: no rows at frame " + std::to_string(j));
        traj.times[j] = it->second;
    }

    for (const auto& id : id_order) {
        const auto& rows = by_id[id];
        Track t;
        t.id = id;
        t.kind = rows.front().kind;
        t.pos.assign(n, Vec2{kMissingSample, kMissingSample});
        const bool any_theta = std::any_of(rows.begin(), rows.end(),
                                           [](const Row& r) { return r.has_theta; });
        if (any_theta) t.theta.assign(n, kMissingSample);
        for (const Row& r : rows) {
            if (r.kind != t.kind)
                throw data_error("trajectory file: particle '" + id + "' changes kind");
            t.pos[static_cast<std::size_t>(r.frame)] = {r.x, r.y};
            if (any_theta && r.has_theta) t.theta[static_cast<std::size_t>(r.frame)] = r.theta;
        }
        traj.tracks.push_back(std::move(t));
    }

    traj.validate();
    return traj;
}

}  // namespace driftbench
