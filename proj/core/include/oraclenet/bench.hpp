#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oraclenet/baselines.hpp"
#include "oraclenet/rollout.hpp"

namespace oraclenet {

enum class PlannerKind { OracleNet, AStar, RrtStar };

[[nodiscard]] std::string to_string(PlannerKind kind);
[[nodiscard]] PlannerKind planner_from_string(const std::string& name);

/// A planner bound to its resources (network, grid, options). The callable gets
/// the query and a per-trial seed.
struct Planner {
    PlannerKind kind;
    std::function<RolloutResult(const Config& start, const Config& goal, std::uint64_t seed)> run;
};

[[nodiscard]] Planner make_oraclenet_planner(const LstmNet& net, const Environment& env, RolloutOptions opts);
[[nodiscard]] Planner make_astar_planner(const GridGraph& graph, double check_resolution);
[[nodiscard]] Planner make_rrt_star_planner(const Environment& env, RrtStarOptions opts);

struct Query {
    Config start;
    Config goal;
};

/// n distinct-endpoint free pairs; query i uses rng mix_seed(seed, i).
[[nodiscard]] std::vector<Query> draw_queries(const Environment& env, int n, std::uint64_t seed);

struct BenchRecord {
    int trial_id = 0;
    PlannerKind planner = PlannerKind::OracleNet;
    std::string env_id;
    Config start;
    Config goal;
    bool success = false;
    double wall_time = 0.0;
    /// Euclidean length of the returned path; empty on failure.
    std::optional<double> path_length;
    int steps = 0;
};

struct BenchTrial {
    BenchRecord record;
    RolloutResult result;
};

/// Every planner on every query of one shared query set. Wall time brackets the
/// planning call only.
[[nodiscard]] std::vector<BenchTrial> run_suite_detailed(const Environment& env, const std::string& env_id,
                                                         const std::vector<Planner>& planners,
                                                         const std::vector<Query>& queries, std::uint64_t seed,
                                                         int jobs = 1);

[[nodiscard]] std::vector<BenchRecord> run_suite(const Environment& env, const std::string& env_id,
                                                 const std::vector<Planner>& planners, int n_trials,
                                                 std::uint64_t seed, int jobs = 1);

struct PlannerSummary {
    PlannerKind planner = PlannerKind::OracleNet;
    int trials = 0;
    int successes = 0;
    /// successes / trials.
    double success_rate = 0.0;
    /// Over successful trials, sample (n - 1) standard deviation.
    double time_mean = 0.0;
    double time_std = 0.0;
    double length_mean = 0.0;
    double length_std = 0.0;
};

struct RatioSummary {
    PlannerKind numerator = PlannerKind::OracleNet;
    PlannerKind denominator = PlannerKind::AStar;
    /// (trial id, length ratio) for queries where both succeeded.
    std::vector<std::pair<int, double>> ratios;
    double mean = 0.0;
    double std = 0.0;
};

struct Histogram {
    PlannerKind planner = PlannerKind::OracleNet;
    std::vector<double> edges;
    std::vector<int> counts;
};

struct ScatterPoint {
    PlannerKind planner = PlannerKind::OracleNet;
    int trial_id = 0;
    double path_length = 0.0;
    double wall_time = 0.0;
    int steps = 0;
};

struct BenchReport {
    std::vector<PlannerSummary> planners;
    std::vector<RatioSummary> ratios;
    std::vector<Histogram> histograms;
    std::vector<ScatterPoint> scatter;

    [[nodiscard]] const PlannerSummary* find(PlannerKind kind) const;
    [[nodiscard]] const RatioSummary* find_ratio(PlannerKind num, PlannerKind den) const;
};

/// Pure function of the records. Empty input gives an empty report.
[[nodiscard]] BenchReport summarize(const std::vector<BenchRecord>& records, int histogram_bins = 20);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

/// Sample standard deviation; 0 for fewer than two values.
[[nodiscard]] MeanStd mean_std(const std::vector<double>& values);

// Output formats.
[[nodiscard]] std::string records_csv(const std::vector<BenchRecord>& records);
[[nodiscard]] std::string ratios_csv(const BenchReport& report);
[[nodiscard]] std::string histogram_csv(const BenchReport& report);
[[nodiscard]] std::string scatter_csv(const BenchReport& report);
/// Markdown table in the completion-time / optimality-ratio layout, followed by
/// success rates and the parameters used.
[[nodiscard]] std::string summary_markdown(const BenchReport& report, const std::string& env_id,
                                           const std::map<std::string, std::string>& parameters);

}  // namespace oraclenet
