#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "driftbench/driftest.hpp"
#include "driftbench/scene.hpp"
#include "driftbench/swimiso.hpp"
#include "driftbench/trajectory.hpp"

namespace driftbench {

inline constexpr const char* kToolVersion = "driftbench 0.1.0";
inline constexpr const char* kSeedEnvVar = "DRIFTBENCH_SEED";

// exit codes: 0 success, 2 input error, 3 data-consistency error
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitData = 3;

// measured-style field log (time_s,Bx_mT,By_mT); angle lookups snap to the
// nearest sample
struct FieldLog {
    std::vector<double> times;
    std::vector<Vec2> field;

    Vec2 nearest(double t) const;
};

FieldLog read_field_log(const std::string& path);

struct SimulateArgs {
    std::string scene_path;
    std::string out_dir;
    double field_log_rate_hz = 1000.0;
    std::optional<std::uint64_t> seed_override;
};

struct AnalyzeArgs {
    std::string trajectories_path;
    std::string scene_path;      // either this ...
    std::string field_log_path;  // ... or this supplies the schedule
    std::string out_dir;
    double exclusion_radius_um = 100.0;  // <= 0 disables exclusion
    std::optional<std::pair<double, double>> osc_window;  // overrides the schedule
    int n_perm = kDefaultPermutations;
    std::uint64_t seed = 12345;
    double body_length_um = kDefaultBodyLengthUm;
};

struct SweepArgs {
    std::vector<std::string> scene_paths;
    std::string out_dir;
    double radius_min_um = 10.0;
    double radius_max_um = 200.0;
    int jobs = 1;
};

struct ReportArgs {
    std::string report_path;
};

int cmd_simulate(const SimulateArgs& args);
int cmd_analyze(const AnalyzeArgs& args);
int cmd_sweep(const SweepArgs& args);
int cmd_report(const ReportArgs& args);

// recommendation from an error-vs-distance curve: the smallest radius beyond
// which every bin stays within 20% of the far-field plateau; nullopt means no
// exclusion is needed
std::optional<double> recommend_radius(const std::vector<DistanceBin>& bins, double radius_min,
                                       double radius_max);

// seed precedence: explicit value, then DRIFTBENCH_SEED, then fallback
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& explicit_seed,
                           std::uint64_t fallback);

}  // namespace driftbench
