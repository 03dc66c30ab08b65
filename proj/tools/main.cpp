#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "oraclenet/manifest.hpp"
#include "oraclenet/types.hpp"

using namespace oraclenet;
using namespace oraclenet::cli;

namespace {

void add_rollout_flags(CLI::App* cmd, RolloutFlags& f) {
    cmd->add_option("--k", f.k, "Training grid nodes per axis; thresholds derive from its spacing (default 100 for "
                                "gridworld2d, 25 for planar_arm)");
    cmd->add_option("--goal-threshold", f.goal_threshold, "Goal connection distance");
    cmd->add_option("--meet-threshold", f.meet_threshold, "Branch meeting distance (bidirectional)");
    cmd->add_option("--epsilon", f.epsilon, "Repair step distance");
    cmd->add_option("--resolution", f.resolution, "Edge collision-check resolution");
    cmd->add_option("--max-steps", f.max_steps, "Network step budget");
    cmd->add_option("--repair-tries", f.repair_tries, "Random directions tried per repair");
    cmd->add_flag("--bidirectional", f.bidirectional, "Grow branches from both ends");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neural motion planning: oracle datasets, LSTM training, rollout and benchmarks"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);

    EnvArgs env_args;
    auto* env_cmd = app.add_subcommand("env", "Validate an environment spec and print a summary");
    env_cmd->add_option("env_file", env_args.env_file, "Environment JSON")->required();

    DatasetArgs ds;
    auto* ds_cmd = app.add_subcommand("dataset", "Generate an A* oracle path corpus");
    ds_cmd->add_option("--env", ds.env_file, "Environment JSON")->required();
    ds_cmd->add_option("--k", ds.k, "Grid nodes per axis")->capture_default_str();
    ds_cmd->add_option("--paths", ds.n_paths, "Number of oracle paths")->capture_default_str();
    ds_cmd->add_option("--seed", ds.seed, "Seed (falls back to ORACLENET_SEED)");
    ds_cmd->add_option("--out", ds.out, "Output dataset file")->required();
    ds_cmd->add_option("--jobs", ds.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

    TrainArgs tr;
    auto* tr_cmd = app.add_subcommand("train", "Train the LSTM planner on a dataset");
    tr_cmd->add_option("--dataset", tr.dataset, "Dataset file")->required();
    tr_cmd->add_option("--env", tr.env_file, "Environment JSON (normalization bounds)")->required();
    tr_cmd->add_option("--arch", tr.arch, "Architecture preset: 2d-paper, 3link-paper, 4link-paper, 6link-paper, ci")
        ->capture_default_str();
    tr_cmd->add_option("--layers", tr.layers, "Explicit hidden sizes, e.g. 128,128 (overrides --arch)")
        ->delimiter(',');
    tr_cmd->add_option("--epochs", tr.epochs)->capture_default_str()->check(CLI::NonNegativeNumber);
    tr_cmd->add_option("--batch-size", tr.batch_size)->capture_default_str()->check(CLI::PositiveNumber);
    tr_cmd->add_option("--lr", tr.lr, "Adam learning rate")->capture_default_str();
    tr_cmd->add_option("--lr-final", tr.lr_final, "Final learning rate as a fraction of --lr (cosine decay)")
        ->capture_default_str();
    tr_cmd->add_option("--goal-hold", tr.goal_hold, "Extra steps per sequence that stay at the goal")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    tr_cmd->add_option("--train-fraction", tr.train_fraction)->capture_default_str();
    tr_cmd->add_option("--float-width", tr.float_width, "Stored float width in bytes (4 or 8)")
        ->capture_default_str()
        ->check(CLI::IsMember({4, 8}));
    tr_cmd->add_option("--seed", tr.seed, "Seed (falls back to ORACLENET_SEED)");
    tr_cmd->add_option("--out", tr.out, "Output weights file")->required();
    tr_cmd->add_option("--loss-csv", tr.loss_csv, "Loss curve CSV (default <out>.loss.csv)");

    PlanArgs pl;
    auto* pl_cmd = app.add_subcommand("plan", "Roll out a path for one query");
    pl_cmd->add_option("--weights", pl.weights)->required();
    pl_cmd->add_option("--env", pl.env_file)->required();
    pl_cmd->add_option("--start", pl.start, "Start configuration, comma separated")->required()->delimiter(',');
    pl_cmd->add_option("--goal", pl.goal, "Goal configuration, comma separated")->required()->delimiter(',');
    add_rollout_flags(pl_cmd, pl.rollout);
    pl_cmd->add_option("--seed", pl.seed, "Repair seed (falls back to ORACLENET_SEED)");
    pl_cmd->add_option("--out", pl.out, "Output path JSON")->required();
    pl_cmd->add_option("--svg", pl.svg, "Also render the path to this SVG");

    BenchArgs bn;
    auto* bn_cmd = app.add_subcommand("bench", "Run planners on a shared random query set");
    bn_cmd->add_option("--env", bn.env_file)->required();
    bn_cmd->add_option("--weights", bn.weights, "Weights (required for oraclenet)");
    bn_cmd->add_option("--planners", bn.planners, "Comma separated: oraclenet, astar, rrtstar")
        ->delimiter(',')
        ->capture_default_str();
    bn_cmd->add_option("--trials", bn.n_trials)->capture_default_str();
    add_rollout_flags(bn_cmd, bn.rollout);
    bn_cmd->add_option("--rrt-iterations", bn.rrt_iterations)->capture_default_str()->check(CLI::PositiveNumber);
    bn_cmd->add_option("--seed", bn.seed, "Query seed (falls back to ORACLENET_SEED)");
    bn_cmd->add_option("--out-dir", bn.out_dir)->required();
    bn_cmd->add_option("--jobs", bn.jobs, "Parallel trials; 1 keeps timings uncontended")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    PlotArgs pt;
    auto* pt_cmd = app.add_subcommand("plot", "Render a path JSON or a dataset to SVG");
    pt_cmd->add_option("--env", pt.env_file)->required();
    pt_cmd->add_option("--input", pt.input, "Path JSON or dataset file")->required();
    pt_cmd->add_option("--out", pt.out, "Output SVG")->required();
    pt_cmd->add_option("--max-paths", pt.max_paths, "Dataset paths to draw")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*env_cmd) return cmd_env(env_args);
        if (*ds_cmd) return cmd_dataset(ds);
        if (*tr_cmd) return cmd_train(tr);
        if (*pl_cmd) return cmd_plan(pl);
        if (*bn_cmd) return cmd_bench(bn);
        if (*pt_cmd) return cmd_plot(pt);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kUsage;
}
