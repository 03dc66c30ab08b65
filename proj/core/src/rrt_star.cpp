#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "oraclenet/baselines.hpp"

namespace oraclenet {

namespace {

using Clock = std::chrono::steady_clock;

double unit_ball_volume(int d) {
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

/// Free volume estimated by rejection sampling with a private stream.
double free_volume(const Environment& env, std::uint64_t seed) {
    constexpr int kSamples = 2000;
    Rng rng(mix_seed(seed, 0xf4ee));
    int hits = 0;
    for (int i = 0; i < kSamples; ++i) {
        hits += env.is_free(env.sample_uniform(rng)) ? 1 : 0;
    }
    double volume = 1.0;
    for (const auto& b : env.bounds()) {
        volume *= b.hi - b.lo;
    }
    return volume * std::max(hits, 1) / kSamples;
}

struct Tree {
    std::vector<Config> nodes;
    std::vector<int> parent;
    std::vector<double> cost;
    std::vector<std::vector<int>> children;

    int add(Config q, int par, double c) {
        nodes.push_back(std::move(q));
        parent.push_back(par);
        cost.push_back(c);
        children.emplace_back();
        const int id = static_cast<int>(nodes.size()) - 1;
        if (par >= 0) {
            children[par].push_back(id);
        }
        return id;
    }

    void reparent(int node, int new_parent, double new_cost) {
        auto& siblings = children[parent[node]];
        siblings.erase(std::find(siblings.begin(), siblings.end(), node));
        parent[node] = new_parent;
        children[new_parent].push_back(node);
        const double delta = new_cost - cost[node];
        std::vector<int> stack{node};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            cost[v] += delta;
            stack.insert(stack.end(), children[v].begin(), children[v].end());
        }
    }

    void verify() const {
        for (std::size_t v = 1; v < nodes.size(); ++v) {
            const int p = parent[v];
            if (p < 0) {
                throw std::logic_error("rrt*: non-root node without a parent");
            }
            const double expect = cost[p] + (nodes[v] - nodes[p]).norm();
            if (std::abs(cost[v] - expect) > 1e-9 * std::max(1.0, expect)) {
                throw std::logic_error("rrt*: cost(child) != cost(parent) + edge");
            }
        }
    }
};

}  // namespace

RrtStarOptions RrtStarOptions::for_grid(const Environment& env, int nodes_per_axis) {
    const auto ro = RolloutOptions::for_grid(env, nodes_per_axis);
    RrtStarOptions o;
    o.step_size = 2.0 * ro.goal_threshold;
    o.goal_threshold = ro.goal_threshold;
    o.check_resolution = ro.check_resolution;
    return o;
}

void RrtStarOptions::validate() const {
    if (max_iterations < 1 || !(step_size > 0.0) || !(neighbor_radius_gamma > 0.0) || !(goal_threshold > 0.0) ||
        !(check_resolution > 0.0) || !(goal_bias >= 0.0 && goal_bias < 1.0)) {
        throw UsageError("rrt* options must be positive with goal_bias in [0, 1)");
    }
}

RolloutResult rrt_star(const Environment& env, const Config& start, const Config& goal, const RrtStarOptions& opts,
                       RrtStarTrace* trace) {
    opts.validate();
    if (start.size() != env.dim() || goal.size() != env.dim()) {
        throw UsageError("query dimension does not match the environment");
    }
    if (!env.is_free(start) || !env.is_free(goal)) {
        throw UsageError("rrt* endpoints must be collision free");
    }
    const auto t0 = Clock::now();
    RolloutResult result;
    RrtStarTrace local;
    RrtStarTrace& tr = trace ? *trace : local;
    tr = RrtStarTrace{};
    if (start == goal) {
        result.path = {start, goal};
        result.status = RolloutStatus::Success;
        result.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
        return result;
    }

    const int d = env.dim();
    const double gamma = opts.neighbor_radius_gamma * 2.0 * std::pow(1.0 + 1.0 / d, 1.0 / d) *
                         std::pow(free_volume(env, opts.seed) / unit_ball_volume(d), 1.0 / d);
    tr.radius_gamma = gamma;

    Rng rng(opts.seed);
    Tree tree;
    tree.add(start, -1, 0.0);
    std::vector<int> goal_parents;

    auto best_goal = [&]() {
        double best = std::numeric_limits<double>::infinity();
        int arg = -1;
        for (int v : goal_parents) {
            const double c = tree.cost[v] + (goal - tree.nodes[v]).norm();
            if (c < best) {
                best = c;
                arg = v;
            }
        }
        return std::pair{arg, best};
    };
    std::size_t next_checkpoint = 0;
    std::vector<int> checkpoints = opts.checkpoints;
    std::sort(checkpoints.begin(), checkpoints.end());

    std::vector<int> near;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        result.steps_taken = it;
        const Config target = uniform01(rng) < opts.goal_bias ? goal : env.sample_uniform(rng);
        if (env.is_free(target)) {
            int nearest = 0;
            double nearest_d2 = std::numeric_limits<double>::infinity();
            for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
                const double d2 = (tree.nodes[v] - target).squaredNorm();
                if (d2 < nearest_d2) {
                    nearest_d2 = d2;
                    nearest = static_cast<int>(v);
                }
            }
            const double dist = std::sqrt(nearest_d2);
            Config x_new = dist <= opts.step_size
                               ? target
                               : Config(tree.nodes[nearest] + (target - tree.nodes[nearest]) * (opts.step_size / dist));
            if (dist > 0.0 && env.is_free(x_new) &&
                env.edge_free(tree.nodes[nearest], x_new, opts.check_resolution)) {
                const double n = static_cast<double>(tree.nodes.size());
                // Shrinking radius without the steer-distance cap; a cap of a
                // few grid cells stalls convergence in large worlds.
                const double radius = gamma * std::pow(std::log(n + 1.0) / (n + 1.0), 1.0 / d);
                near.clear();
                for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
                    if ((tree.nodes[v] - x_new).norm() <= radius) {
                        near.push_back(static_cast<int>(v));
                    }
                }
                int best_parent = nearest;
                double best_cost = tree.cost[nearest] + (x_new - tree.nodes[nearest]).norm();
                for (int v : near) {
                    const double c = tree.cost[v] + (x_new - tree.nodes[v]).norm();
                    if (c < best_cost && v != nearest && env.edge_free(tree.nodes[v], x_new, opts.check_resolution)) {
                        best_cost = c;
                        best_parent = v;
                    }
                }
                const int id = tree.add(x_new, best_parent, best_cost);
                for (int v : near) {
                    if (v == best_parent || v == 0) {
                        continue;
                    }
                    const double c = best_cost + (tree.nodes[v] - x_new).norm();
                    if (c < tree.cost[v] && env.edge_free(x_new, tree.nodes[v], opts.check_resolution)) {
                        tree.reparent(v, id, c);
                    }
                }
                if (opts.debug_checks) {
                    tree.verify();
                }
                if ((goal - x_new).norm() <= opts.goal_threshold &&
                    env.edge_free(x_new, goal, opts.check_resolution)) {
                    goal_parents.push_back(id);
                    if (tr.first_solution_iteration < 0) {
                        tr.first_solution_iteration = it;
                        tr.first_solution_time = std::chrono::duration<double>(Clock::now() - t0).count();
                    }
                }
            }
        }
        while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == it) {
            tr.checkpoint_costs.emplace_back(it, best_goal().second);
            ++next_checkpoint;
        }
    }
    tr.tree_size = tree.nodes.size();

    const auto [arg, cost] = best_goal();
    if (arg < 0) {
        result.status = RolloutStatus::MaxStepsExceeded;
        result.path = {start};
    } else {
        Path branch;
        for (int v = arg; v >= 0; v = tree.parent[v]) {
            branch.push_back(tree.nodes[v]);
        }
        std::reverse(branch.begin(), branch.end());
        if (!(branch.back() == goal)) {
            branch.push_back(goal);
        }
        result.path = std::move(branch);
        result.status = RolloutStatus::Success;
    }
    result.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
    return result;
}

NodeId snap_to_grid(const GridGraph& graph, const Config& q, double check_resolution) {
    const NodeId nearest = graph.nearest_node(q);
    if (graph.env().edge_free(q, graph.config(nearest), check_resolution)) {
        return nearest;
    }
    std::vector<std::pair<double, NodeId>> ranked;
    ranked.reserve(graph.free_nodes().size());
    for (NodeId v : graph.free_nodes()) {
        ranked.emplace_back((graph.config(v) - q).squaredNorm(), v);
    }
    std::sort(ranked.begin(), ranked.end());
    for (const auto& [d2, v] : ranked) {
        if (graph.env().edge_free(q, graph.config(v), check_resolution)) {
            return v;
        }
    }
    return -1;
}

RolloutResult astar_plan(const GridGraph& graph, const Config& start, const Config& goal, double check_resolution,
                         bool apply_rewire) {
    const Environment& env = graph.env();
    if (start.size() != env.dim() || goal.size() != env.dim()) {
        throw UsageError("query dimension does not match the environment");
    }
    if (!env.is_free(start) || !env.is_free(goal)) {
        throw UsageError("A* endpoints must be collision free");
    }
    const auto t0 = Clock::now();
    RolloutResult result;
    result.status = RolloutStatus::MaxStepsExceeded;
    result.path = {start};
    if (start == goal) {
        result.path.push_back(goal);
        result.status = RolloutStatus::Success;
    } else {
        const NodeId s = snap_to_grid(graph, start, check_resolution);
        const NodeId g = snap_to_grid(graph, goal, check_resolution);
        if (s >= 0 && g >= 0) {
            if (auto found = astar(graph, s, g)) {
                for (const auto& q : to_configs(graph, found->nodes)) {
                    if (!(q == result.path.back())) {
                        result.path.push_back(q);
                    }
                }
                if (!(goal == result.path.back())) {
                    result.path.push_back(goal);
                }
                result.steps_taken = static_cast<int>(found->nodes.size());
                result.status = RolloutStatus::Success;
                if (apply_rewire) {
                    result.path = rewire(env, result.path, check_resolution);
                }
            }
        }
    }
    result.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
    return result;
}

}  // namespace oraclenet
