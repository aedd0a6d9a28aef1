#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "driftbench/geometry.hpp"
#include "driftbench/trajectory.hpp"

namespace driftbench {

// Per-particle displacement-from-start series; delta[0] is exactly zero.
struct DisplacementSeries {
    std::string particle_id;
    std::vector<Vec2> delta;  // um, indexed by frame
};

struct LinearFit {
    double vx = 0.0;  // um/s
    double vy = 0.0;  // um/s
    double r2 = 1.0;
};

struct DriftEstimate {
    std::vector<Vec2> median;                 // per-frame componentwise median, um
    std::vector<DisplacementSeries> errors;   // per-particle deviation from the median
    std::vector<double> per_particle_rmse;    // um
    double rmse = 0.0;                        // um, pooled over particles and frames > 0
    int n_particles = 0;
    int n_frames_used = 0;                    // frames after frame 0
    LinearFit linear_fit;
};

enum class ExclusionMode { Off, IncrementMasking };

struct ExclusionConfig {
    std::string center_source;  // swimmer particle id
    double radius = 100.0;      // um
    ExclusionMode mode = ExclusionMode::IncrementMasking;
};

struct ExclusionResult {
    std::vector<DisplacementSeries> series;  // masked effective displacements
    std::vector<std::string> ever_inside;    // ids that entered the zone
    double masked_fraction = 0.0;            // masked increments / total increments
};

struct DistanceBin {
    double lo = 0.0;          // um
    double hi = 0.0;          // um
    double mean_abs_error = 0.0;  // um per frame increment
    long n_samples = 0;
};

// displacement-from-start for every complete track of the given kind;
// a track missing any frame is an error naming the particle
std::vector<DisplacementSeries> displacements(const TrajectorySet& traj, ParticleKind kind);

// per-frame componentwise median across particles (even count: mean of the
// two central order statistics)
std::vector<Vec2> median_drift(const std::vector<DisplacementSeries>& series);

// pooled root-mean-square error of the series against a reference series,
// counting the frames after frame 0
double rmse(const std::vector<DisplacementSeries>& series, const std::vector<Vec2>& reference);

// least squares through (t0, 0) with pooled-2D r^2 about the componentwise means
LinearFit linear_fit_r2(const std::vector<Vec2>& median, const std::vector<double>& times);

// median + errors + rmse + fit in one pass
DriftEstimate estimate_drift(const std::vector<DisplacementSeries>& series,
                             const std::vector<double>& times);

// zero out displacement increments accrued while a particle is within
// `radius` of the swimmer (an increment counts only if the particle is
// outside at both of its endpoint frames)
ExclusionResult apply_exclusion(const TrajectorySet& traj,
                                const std::vector<DisplacementSeries>& series,
                                const ExclusionConfig& cfg);

// mean |per-frame increment - median increment| binned by distance to the
// swimmer (10 um bins); empty bins are absent
std::vector<DistanceBin> error_vs_distance(const TrajectorySet& traj,
                                           const std::vector<DisplacementSeries>& series,
                                           const std::string& swimmer_id);

// two-sample permutation test on the difference of group means; two-sided,
// add-one smoothed p-value
double significance_inside_outside(const std::vector<double>& inside_rmse,
                                   const std::vector<double>& outside_rmse, int n_perm,
                                   std::uint64_t seed);

inline constexpr double kDistanceBinWidthUm = 10.0;
inline constexpr int kDefaultPermutations = 10000;

}  // namespace driftbench
