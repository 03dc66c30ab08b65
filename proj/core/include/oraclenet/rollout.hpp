#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oraclenet/env.hpp"
#include "oraclenet/lstm.hpp"

namespace oraclenet {

struct RolloutOptions {
    /// C-space distance at which the goal (or the other branch) may be connected.
    double goal_threshold = 1.0;
    int max_steps = 400;
    /// Repair step distance.
    double epsilon = 1.5;
    int repair_max_tries = 100;
    double check_resolution = 0.5;
    bool bidirectional = false;
    double meet_threshold = 2.0;
    std::uint64_t seed = 0;

    /// Defaults derived from the training grid spacing.
    [[nodiscard]] static RolloutOptions for_grid(const Environment& env, int nodes_per_axis);
    void validate() const;
};

enum class RolloutStatus { Success, MaxStepsExceeded, RepairExhausted };

[[nodiscard]] std::string to_string(RolloutStatus status);
[[nodiscard]] RolloutStatus rollout_status_from_string(const std::string& name);

struct RolloutResult {
    Path path;
    RolloutStatus status = RolloutStatus::MaxStepsExceeded;
    int steps_taken = 0;
    int repairs_invoked = 0;
    double wall_time = 0.0;
    /// Network prediction time of each step, seconds.
    std::vector<double> per_step_times;

    [[nodiscard]] bool success() const noexcept { return status == RolloutStatus::Success; }
};

/// Goal-conditioned rollout from start; repaired whenever a prediction or the
/// edge leading to it is in collision, rewired on success.
/// Throws UsageError when start or goal is not free or dimensions disagree.
[[nodiscard]] RolloutResult rollout(const LstmNet& net, const Environment& env, const Config& start,
                                    const Config& goal, const RolloutOptions& opts);

/// Two branches grown alternately, each conditioned on the other's head.
[[nodiscard]] RolloutResult rollout_bidirectional(const LstmNet& net, const Environment& env, const Config& start,
                                                  const Config& goal, const RolloutOptions& opts);

/// Dispatches on opts.bidirectional.
[[nodiscard]] RolloutResult plan(const LstmNet& net, const Environment& env, const Config& start,
                                 const Config& goal, const RolloutOptions& opts);

/// Random point at distance epsilon from prev with a free connecting edge, or
/// nullopt after repair_max_tries draws.
[[nodiscard]] std::optional<Config> repair(const Environment& env, const Config& prev, const RolloutOptions& opts,
                                           Rng& rng);

/// Greedy shortcutting: from each kept waypoint jump to the farthest waypoint
/// reachable by a free straight segment.
[[nodiscard]] Path rewire(const Environment& env, const Path& path, double check_resolution);

/// All waypoints free and every edge free at the given resolution.
[[nodiscard]] bool path_valid(const Environment& env, const Path& path, double check_resolution);

/// {"env_hash","status","waypoints","wall_time_s","steps","repairs"}.
[[nodiscard]] std::string rollout_to_json(const RolloutResult& result, const std::string& env_hash);

struct PathDocument {
    std::string env_hash;
    std::string status;
    Path waypoints;
    double wall_time_s = 0.0;
    int steps = 0;
    int repairs = 0;
};

/// Throws FormatError on malformed input.
[[nodiscard]] PathDocument path_document_from_json(const std::string& text);

}  // namespace oraclenet
