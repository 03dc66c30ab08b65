#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace oraclenet::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kDomain = 3;

/// Seed given on the command line, else ORACLENET_SEED, else 1.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag);

struct EnvArgs {
    std::string env_file;
};

struct DatasetArgs {
    std::string env_file;
    int k = 100;
    std::int64_t n_paths = 1000;
    std::optional<std::uint64_t> seed;
    std::string out;
    int jobs = 1;
};

struct TrainArgs {
    std::string dataset;
    std::string env_file;
    std::string arch = "ci";
    std::vector<int> layers;
    int epochs = 50;
    int batch_size = 16;
    double lr = 1e-3;
    double lr_final = 1.0;
    int goal_hold = 0;
    double train_fraction = 0.8;
    int float_width = 8;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string loss_csv;
};

/// Rollout overrides; unset values come from RolloutOptions::for_grid.
struct RolloutFlags {
    int k = 0;
    std::optional<double> goal_threshold;
    std::optional<double> meet_threshold;
    std::optional<double> epsilon;
    std::optional<double> resolution;
    std::optional<int> max_steps;
    std::optional<int> repair_tries;
    bool bidirectional = false;
};

struct PlanArgs {
    std::string weights;
    std::string env_file;
    std::vector<double> start;
    std::vector<double> goal;
    RolloutFlags rollout;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string svg;
};

struct BenchArgs {
    std::string env_file;
    std::string weights;
    std::vector<std::string> planners{"oraclenet", "astar", "rrtstar"};
    int n_trials = 100;
    RolloutFlags rollout;
    int rrt_iterations = 5000;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    int jobs = 1;
};

struct PlotArgs {
    std::string env_file;
    std::string input;
    std::string out;
    int max_paths = 50;
};

int cmd_env(const EnvArgs& args);
int cmd_dataset(const DatasetArgs& args);
int cmd_train(const TrainArgs& args);
int cmd_plan(const PlanArgs& args);
int cmd_bench(const BenchArgs& args);
int cmd_plot(const PlotArgs& args);

}  // namespace oraclenet::cli
