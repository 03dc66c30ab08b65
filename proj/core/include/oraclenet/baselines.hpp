#pragma once

#include <cstdint>
#include <vector>

#include "oraclenet/rollout.hpp"
#include "oraclenet/search.hpp"

namespace oraclenet {

struct RrtStarOptions {
    int max_iterations = 5000;
    /// Steer distance.
    double step_size = 2.0;
    /// Scale on the asymptotically optimal radius 2 (1 + 1/d)^(1/d) (mu_free / zeta_d)^(1/d).
    double neighbor_radius_gamma = 1.0;
    double goal_bias = 0.05;
    double goal_threshold = 1.0;
    double check_resolution = 0.5;
    std::uint64_t seed = 0;
    /// Iterations at which the best goal cost is recorded.
    std::vector<int> checkpoints;
    /// Re-verify cost(child) == cost(parent) + edge after every rewire.
    bool debug_checks = false;

    [[nodiscard]] static RrtStarOptions for_grid(const Environment& env, int nodes_per_axis);
    void validate() const;
};

struct RrtStarTrace {
    /// Iteration and elapsed seconds of the first goal connection; -1 / NaN when none.
    int first_solution_iteration = -1;
    double first_solution_time = 0.0;
    /// (iteration, best cost) per requested checkpoint; cost is +inf without a solution.
    std::vector<std::pair<int, double>> checkpoint_costs;
    double radius_gamma = 0.0;
    std::size_t tree_size = 0;
};

/// Fixed-iteration RRT*. Success returns the cheapest goal-connected branch;
/// otherwise status is MaxStepsExceeded. steps_taken counts iterations.
[[nodiscard]] RolloutResult rrt_star(const Environment& env, const Config& start, const Config& goal,
                                     const RrtStarOptions& opts, RrtStarTrace* trace = nullptr);

/// Continuous-query A*: snap both endpoints to the nearest free node with a
/// free connecting segment, search the grid, then rewire. A failed search
/// reports MaxStepsExceeded.
[[nodiscard]] RolloutResult astar_plan(const GridGraph& graph, const Config& start, const Config& goal,
                                       double check_resolution, bool apply_rewire = true);

/// Nearest free node whose straight segment to q is free, or -1.
[[nodiscard]] NodeId snap_to_grid(const GridGraph& graph, const Config& q, double check_resolution);

}  // namespace oraclenet
