#include "oraclenet/rollout.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace oraclenet {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_query(const LstmNet& net, const Environment& env, const Config& start, const Config& goal) {
    if (net.dim() != env.dim()) {
        throw UsageError("network dimension " + std::to_string(net.dim()) + " does not match environment dimension " +
                         std::to_string(env.dim()));
    }
    if (start.size() != env.dim() || goal.size() != env.dim()) {
        throw UsageError("query dimension does not match the environment");
    }
    if (!env.is_free(start)) {
        throw UsageError("start configuration is not collision free");
    }
    if (!env.is_free(goal)) {
        throw UsageError("goal configuration is not collision free");
    }
}

Eigen::VectorXd augmented(const LstmNet& net, const Config& current, const Config& target) {
    Eigen::VectorXd x(2 * net.dim());
    x << net.norm.normalize(current), net.norm.normalize(target);
    return x;
}

bool connectable(const Environment& env, const Config& a, const Config& b, double threshold, double resolution) {
    return (a - b).norm() <= threshold && env.edge_free(a, b, resolution);
}

/// Predicts the next waypoint from `head`, repairing when the prediction or its
/// edge collides. Returns nullopt on repair exhaustion.
std::optional<Config> predict_next(const LstmNet& net, const Environment& env, LstmState& state, const Config& head,
                                   const Config& target, const RolloutOptions& opts, Rng& rng,
                                   RolloutResult& result) {
    const auto t0 = Clock::now();
    const Eigen::VectorXd y = advance(net, state, augmented(net, head, target));
    result.per_step_times.push_back(seconds_since(t0));
    ++result.steps_taken;

    Config next = net.norm.denormalize(y);
    if (next.allFinite() && env.is_free(next) && env.edge_free(head, next, opts.check_resolution)) {
        return next;
    }
    ++result.repairs_invoked;
    return repair(env, head, opts, rng);
}

}  // namespace

RolloutOptions RolloutOptions::for_grid(const Environment& env, int nodes_per_axis) {
    if (nodes_per_axis < 2) {
        throw UsageError("nodes_per_axis must be at least 2");
    }
    double spacing = std::numeric_limits<double>::infinity();
    for (const auto& b : env.bounds()) {
        spacing = std::min(spacing, (b.hi - b.lo) / (nodes_per_axis - 1));
    }
    RolloutOptions o;
    o.goal_threshold = spacing;
    o.meet_threshold = 2.0 * spacing;
    o.epsilon = 1.5 * spacing;
    o.repair_max_tries = 100;
    o.check_resolution = 0.5 * spacing;
    o.max_steps = 4 * static_cast<int>(std::ceil(std::sqrt(static_cast<double>(env.dim())) * (nodes_per_axis - 1)));
    return o;
}

void RolloutOptions::validate() const {
    if (!(goal_threshold > 0.0) || !(epsilon > 0.0) || !(check_resolution > 0.0) || !(meet_threshold > 0.0) ||
        repair_max_tries < 1 || max_steps < 1) {
        throw UsageError("rollout options must all be positive and max_steps >= 1");
    }
}

std::string to_string(RolloutStatus status) {
    switch (status) {
        case RolloutStatus::Success: return "success";
        case RolloutStatus::MaxStepsExceeded: return "max_steps_exceeded";
        case RolloutStatus::RepairExhausted: return "repair_exhausted";
    }
    return "unknown";
}

RolloutStatus rollout_status_from_string(const std::string& name) {
    if (name == "success") return RolloutStatus::Success;
    if (name == "max_steps_exceeded") return RolloutStatus::MaxStepsExceeded;
    if (name == "repair_exhausted") return RolloutStatus::RepairExhausted;
    throw FormatError("unknown status '" + name + "'");
}

std::optional<Config> repair(const Environment& env, const Config& prev, const RolloutOptions& opts, Rng& rng) {
    const int d = env.dim();
    Eigen::VectorXd u(d);
    for (int attempt = 0; attempt < opts.repair_max_tries; ++attempt) {
        double n2 = 0.0;
        do {
            for (int i = 0; i < d; ++i) {
                u[i] = standard_normal(rng);
            }
            n2 = u.squaredNorm();
        } while (n2 == 0.0);
        Config cand = prev + opts.epsilon * u / std::sqrt(n2);
        if (env.is_free(cand) && env.edge_free(prev, cand, opts.check_resolution)) {
            return cand;
        }
    }
    return std::nullopt;
}

Path rewire(const Environment& env, const Path& path, double check_resolution) {
    if (path.size() <= 2) {
        return path;
    }
    Path out{path.front()};
    std::size_t i = 0;
    const std::size_t last = path.size() - 1;
    while (i < last) {
        std::size_t j = last;
        while (j > i + 1 && !env.edge_free(path[i], path[j], check_resolution)) {
            --j;
        }
        out.push_back(path[j]);
        i = j;
    }
    return out;
}

bool path_valid(const Environment& env, const Path& path, double check_resolution) {
    if (path.empty()) {
        return false;
    }
    for (const auto& q : path) {
        if (q.size() != env.dim() || !env.is_free(q)) {
            return false;
        }
    }
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (!env.segment_free(path[i - 1], path[i], check_resolution)) {
            return false;
        }
    }
    return true;
}

RolloutResult rollout(const LstmNet& net, const Environment& env, const Config& start, const Config& goal,
                      const RolloutOptions& opts) {
    opts.validate();
    check_query(net, env, start, goal);
    const auto t0 = Clock::now();
    RolloutResult result;
    result.path.push_back(start);
    if (connectable(env, start, goal, opts.goal_threshold, opts.check_resolution)) {
        result.path.push_back(goal);
        result.status = RolloutStatus::Success;
        result.wall_time = seconds_since(t0);
        return result;
    }
    Rng rng(opts.seed);
    LstmState state = LstmState::zeros(net);
    result.status = RolloutStatus::MaxStepsExceeded;
    while (result.steps_taken < opts.max_steps) {
        auto next = predict_next(net, env, state, result.path.back(), goal, opts, rng, result);
        if (!next) {
            result.status = RolloutStatus::RepairExhausted;
            break;
        }
        result.path.push_back(std::move(*next));
        if (connectable(env, result.path.back(), goal, opts.goal_threshold, opts.check_resolution)) {
            result.path.push_back(goal);
            result.status = RolloutStatus::Success;
            break;
        }
    }
    if (result.success()) {
        result.path = rewire(env, result.path, opts.check_resolution);
    }
    result.wall_time = seconds_since(t0);
    return result;
}

RolloutResult rollout_bidirectional(const LstmNet& net, const Environment& env, const Config& start,
                                    const Config& goal, const RolloutOptions& opts) {
    opts.validate();
    check_query(net, env, start, goal);
    const auto t0 = Clock::now();
    RolloutResult result;
    if (connectable(env, start, goal, opts.meet_threshold, opts.check_resolution)) {
        result.path = {start, goal};
        result.status = RolloutStatus::Success;
        result.wall_time = seconds_since(t0);
        return result;
    }
    Rng rng(opts.seed);
    Path forward{start};
    Path backward{goal};
    LstmState state_f = LstmState::zeros(net);
    LstmState state_b = LstmState::zeros(net);
    result.status = RolloutStatus::MaxStepsExceeded;
    for (int iter = 0; result.steps_taken < opts.max_steps; ++iter) {
        const bool from_start = iter % 2 == 0;
        Path& mine = from_start ? forward : backward;
        const Path& other = from_start ? backward : forward;
        auto next = predict_next(net, env, from_start ? state_f : state_b, mine.back(), other.back(), opts, rng,
                                 result);
        if (!next) {
            result.status = RolloutStatus::RepairExhausted;
            break;
        }
        mine.push_back(std::move(*next));
        if (connectable(env, forward.back(), backward.back(), opts.meet_threshold, opts.check_resolution)) {
            result.status = RolloutStatus::Success;
            break;
        }
    }
    result.path = forward;
    result.path.insert(result.path.end(), backward.rbegin(), backward.rend());
    if (result.success()) {
        result.path = rewire(env, result.path, opts.check_resolution);
    }
    result.wall_time = seconds_since(t0);
    return result;
}

RolloutResult plan(const LstmNet& net, const Environment& env, const Config& start, const Config& goal,
                   const RolloutOptions& opts) {
    return opts.bidirectional ? rollout_bidirectional(net, env, start, goal, opts)
                              : rollout(net, env, start, goal, opts);
}

std::string rollout_to_json(const RolloutResult& result, const std::string& env_hash) {
    nlohmann::json j;
    j["env_hash"] = env_hash;
    j["status"] = to_string(result.status);
    j["waypoints"] = nlohmann::json::array();
    for (const auto& q : result.path) {
        j["waypoints"].push_back(std::vector<double>(q.data(), q.data() + q.size()));
    }
    j["wall_time_s"] = result.wall_time;
    j["steps"] = result.steps_taken;
    j["repairs"] = result.repairs_invoked;
    return j.dump(2);
}

PathDocument path_document_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        PathDocument doc;
        doc.env_hash = j.value("env_hash", "");
        doc.status = j.value("status", "success");
        for (const auto& w : j.at("waypoints")) {
            const auto v = w.get<std::vector<double>>();
            doc.waypoints.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
        }
        doc.wall_time_s = j.value("wall_time_s", 0.0);
        doc.steps = j.value("steps", 0);
        doc.repairs = j.value("repairs", 0);
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed path JSON: ") + e.what());
    }
}

}  // namespace oraclenet
