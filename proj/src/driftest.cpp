#include "driftbench/driftest.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "driftbench/errors.hpp"
#include "driftbench/rng.hpp"

namespace driftbench {

std::vector<DisplacementSeries> displacements(const TrajectorySet& traj, ParticleKind kind) {
    std::vector<DisplacementSeries> out;
    for (const auto& t : traj.tracks) {
        if (t.kind != kind) continue;
        if (!t.complete())
            throw data_error("particle '" + t.id +
                             "' is missing frames and cannot be used for drift estimation");
        DisplacementSeries s;
        s.particle_id = t.id;
        s.delta.resize(t.pos.size());
        const Vec2 origin = t.pos[0];
        for (std::size_t j = 0; j < t.pos.size(); ++j) s.delta[j] = t.pos[j] - origin;
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

void check_grids(const std::vector<DisplacementSeries>& series) {
    if (series.empty()) throw data_error("drift estimation: no displacement series");
    const std::size_t n = series.front().delta.size();
    if (n == 0) throw data_error("drift estimation: empty series");
    for (const auto& s : series)
        if (s.delta.size() != n)
            throw data_error("drift estimation: series '" + s.particle_id +
                             "' is on a different frame grid");
}

double median_of(std::vector<double>& v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (n % 2 == 0) {
        const double lower = *std::max_element(v.begin(), v.begin() + mid);
        m = 0.5 * (lower + m);
    }
    return m;
}

}  // namespace

std::vector<Vec2> median_drift(const std::vector<DisplacementSeries>& series) {
    check_grids(series);
    const std::size_t n_frames = series.front().delta.size();
    std::vector<Vec2> med(n_frames);
    std::vector<double> xs(series.size()), ys(series.size());
    for (std::size_t j = 0; j < n_frames; ++j) {
        for (std::size_t i = 0; i < series.size(); ++i) {
            xs[i] = series[i].delta[j].x;
            ys[i] = series[i].delta[j].y;
        }
        med[j] = {median_of(xs), median_of(ys)};
    }
    return med;
}

double rmse(const std::vector<DisplacementSeries>& series, const std::vector<Vec2>& reference) {
    check_grids(series);
    if (reference.size() != series.front().delta.size())
        throw data_error("rmse: reference series is on a different frame grid");
    const std::size_t s = series.front().delta.size() - 1;  // frames after frame 0
    const std::size_t n = series.size();
    if (s == 0) throw data_error("rmse: need at least one frame after frame 0");

    double sum = 0.0;
    for (std::size_t j = 1; j <= s; ++j) {
        for (const auto& ser : series) {
            const Vec2 e = ser.delta[j] - reference[j];
            sum += e.x * e.x + e.y * e.y;
        }
    }
    return std::sqrt(sum / (static_cast<double>(n) * static_cast<double>(s)));
}

LinearFit linear_fit_r2(const std::vector<Vec2>& median, const std::vector<double>& times) {
    if (median.size() != times.size())
        throw data_error("linear fit: series and time vector differ in length");
    if (median.size() < 3) throw data_error("linear fit: need at least 3 frames");

    const double t0 = times[0];
    double stt = 0.0, stx = 0.0, sty = 0.0;
    double sx = 0.0, sy = 0.0;
    const std::size_t n = median.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double tau = times[j] - t0;
        stt += tau * tau;
        stx += tau * median[j].x;
        sty += tau * median[j].y;
        sx += median[j].x;
        sy += median[j].y;
    }

    LinearFit fit;
    if (stt == 0.0) throw data_error("linear fit: degenerate time grid");
    fit.vx = stx / stt;
    fit.vy = sty / stt;

    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double tau = times[j] - t0;
        const double rx = median[j].x - fit.vx * tau;
        const double ry = median[j].y - fit.vy * tau;
        ss_res += rx * rx + ry * ry;
        ss_tot += (median[j].x - mx) * (median[j].x - mx) +
                  (median[j].y - my) * (median[j].y - my);
    }
    if (ss_tot <= 0.0) {
        // flat reference series: a zero-velocity fit explains it exactly
        fit.r2 = ss_res <= 1e-24 ? 1.0 : 0.0;
    } else {
        fit.r2 = 1.0 - ss_res / ss_tot;
    }
    return fit;
}

DriftEstimate estimate_drift(const std::vector<DisplacementSeries>& series,
                             const std::vector<double>& times) {
    DriftEstimate est;
    est.median = median_drift(series);
    est.rmse = rmse(series, est.median);
    est.n_particles = static_cast<int>(series.size());
    est.n_frames_used = static_cast<int>(est.median.size()) - 1;
    est.linear_fit = linear_fit_r2(est.median, times);

    const std::size_t s = est.median.size() - 1;
    for (const auto& ser : series) {
        DisplacementSeries err;
        err.particle_id = ser.particle_id;
        err.delta.resize(ser.delta.size());
        double sum = 0.0;
        for (std::size_t j = 0; j < ser.delta.size(); ++j) {
            err.delta[j] = ser.delta[j] - est.median[j];
            if (j > 0) sum += norm2(err.delta[j]);
        }
        est.per_particle_rmse.push_back(std::sqrt(sum / static_cast<double>(s)));
        est.errors.push_back(std::move(err));
    }
    return est;
}

ExclusionResult apply_exclusion(const TrajectorySet& traj,
                                const std::vector<DisplacementSeries>& series,
                                const ExclusionConfig& cfg) {
    if (!(cfg.radius > 0)) throw input_error("exclusion: radius must be positive");
    check_grids(series);

    ExclusionResult out;
    if (cfg.mode == ExclusionMode::Off) {
        out.series = series;
        return out;
    }

    const Track* swim = traj.find(cfg.center_source);
    if (!swim) throw data_error("exclusion: swimmer '" + cfg.center_source + "' not found");
    if (!swim->complete())
        throw data_error("exclusion: swimmer '" + cfg.center_source + "' is missing frames");

    const std::size_t n_frames = series.front().delta.size();
    if (swim->pos.size() != n_frames)
        throw data_error("exclusion: swimmer track is on a different frame grid");

    long masked = 0, total = 0;
    for (const auto& ser : series) {
        const Track* track = traj.find(ser.particle_id);
        if (!track)
            throw data_error("exclusion: particle '" + ser.particle_id + "' not in trajectory");

        std::vector<char> inside(n_frames);
        bool ever = false;
        for (std::size_t j = 0; j < n_frames; ++j) {
            inside[j] = norm(track->pos[j] - swim->pos[j]) < cfg.radius;
            ever |= inside[j] != 0;
        }

        DisplacementSeries masked_series;
        masked_series.particle_id = ser.particle_id;
        masked_series.delta.resize(n_frames);
        masked_series.delta[0] = {0.0, 0.0};
        for (std::size_t j = 1; j < n_frames; ++j) {
            const bool keep = !inside[j - 1] && !inside[j];
            const Vec2 inc = ser.delta[j] - ser.delta[j - 1];
            masked_series.delta[j] =
                masked_series.delta[j - 1] + (keep ? inc : Vec2{0.0, 0.0});
            ++total;
            if (!keep) ++masked;
        }
        if (ever) out.ever_inside.push_back(ser.particle_id);
        out.series.push_back(std::move(masked_series));
    }
    out.masked_fraction = total > 0 ? static_cast<double>(masked) / total : 0.0;
    return out;
}

std::vector<DistanceBin> error_vs_distance(const TrajectorySet& traj,
                                           const std::vector<DisplacementSeries>& series,
                                           const std::string& swimmer_id) {
    check_grids(series);
    const Track* swim = traj.find(swimmer_id);
    if (!swim) throw data_error("error-vs-distance: swimmer '" + swimmer_id + "' not found");

    const std::size_t n_frames = series.front().delta.size();
    if (swim->pos.size() != n_frames)
        throw data_error("error-vs-distance: swimmer track is on a different frame grid");

    std::map<long, std::pair<double, long>> bins;  // bin index -> (sum, count)
    std::vector<double> xs(series.size()), ys(series.size());
    for (std::size_t j = 1; j < n_frames; ++j) {
        for (std::size_t i = 0; i < series.size(); ++i) {
            const Vec2 inc = series[i].delta[j] - series[i].delta[j - 1];
            xs[i] = inc.x;
            ys[i] = inc.y;
        }
        std::vector<double> xc = xs, yc = ys;
        const Vec2 med_inc{median_of(xc), median_of(yc)};
        for (std::size_t i = 0; i < series.size(); ++i) {
            const Track* track = traj.find(series[i].particle_id);
            if (!track)
                throw data_error("error-vs-distance: particle '" + series[i].particle_id +
                                 "' not in trajectory");
            // distance at the start of the increment
            const double dist = norm(track->pos[j - 1] - swim->pos[j - 1]);
            const double err = norm(Vec2{xs[i], ys[i]} - med_inc);
            auto& bin = bins[static_cast<long>(std::floor(dist / kDistanceBinWidthUm))];
            bin.first += err;
            bin.second += 1;
        }
    }

    std::vector<DistanceBin> out;
    for (const auto& [idx, agg] : bins) {
        DistanceBin b;
        b.lo = idx * kDistanceBinWidthUm;
        b.hi = (idx + 1) * kDistanceBinWidthUm;
        b.mean_abs_error = agg.first / static_cast<double>(agg.second);
        b.n_samples = agg.second;
        out.push_back(b);
    }
    return out;
}

double significance_inside_outside(const std::vector<double>& inside_rmse,
                                   const std::vector<double>& outside_rmse, int n_perm,
                                   std::uint64_t seed) {
    if (inside_rmse.empty() || outside_rmse.empty())
        throw input_error("significance test: both groups must be non-empty");
    if (n_perm < 100) throw input_error("significance test: need at least 100 permutations");

    auto group_mean_diff = [](std::span<const double> pooled, std::size_t n_inside) {
        double a = 0.0, b = 0.0;
        for (std::size_t i = 0; i < pooled.size(); ++i)
            (i < n_inside ? a : b) += pooled[i];
        return a / static_cast<double>(n_inside) -
               b / static_cast<double>(pooled.size() - n_inside);
    };

    std::vector<double> pooled = inside_rmse;
    pooled.insert(pooled.end(), outside_rmse.begin(), outside_rmse.end());
    const double observed = std::abs(group_mean_diff(pooled, inside_rmse.size()));

    DetRng rng(seed);
    long hits = 0;
    for (int k = 0; k < n_perm; ++k) {
        rng.shuffle(pooled);
        if (std::abs(group_mean_diff(pooled, inside_rmse.size())) >= observed - 1e-12) ++hits;
    }
    return static_cast<double>(hits + 1) / static_cast<double>(n_perm + 1);
}

}  // namespace driftbench
