#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "oraclenet/bench.hpp"
#include "oraclenet/dataset.hpp"
#include "oraclenet/env.hpp"
#include "oraclenet/manifest.hpp"
#include "oraclenet/rollout.hpp"
#include "oraclenet/svg.hpp"
#include "oraclenet/train.hpp"

namespace oraclenet::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kGeneratorVersion = "astar-grid/1";

std::string read_text(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw UsageError("cannot open '" + file + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& file, const std::string& text) {
    const fs::path p(file);
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path());
    }
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
        throw UsageError("cannot write '" + file + "'");
    }
}

/// Any problem with the environment file is an environment error (exit 3).
Environment load_env(const std::string& file) {
    try {
        return load_environment(file);
    } catch (const DomainError&) {
        throw;
    } catch (const std::exception& e) {
        throw DomainError("environment '" + file + "': " + e.what());
    }
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join(const std::vector<int>& v, char sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? std::string(1, sep) : "") + std::to_string(v[i]);
    }
    return s;
}

Config to_config(const Environment& env, const std::vector<double>& v, const char* what) {
    if (static_cast<int>(v.size()) != env.dim()) {
        throw UsageError(std::string(what) + " has " + std::to_string(v.size()) + " coordinates, environment has " +
                         std::to_string(env.dim()));
    }
    Config q(env.dim());
    for (int i = 0; i < env.dim(); ++i) {
        q[i] = v[i];
    }
    return q;
}

int default_k(const Environment& env) {
    return env.kind() == EnvKind::GridWorld2D ? 100 : 25;
}

RolloutOptions rollout_options(const Environment& env, const RolloutFlags& f, std::uint64_t seed) {
    auto opts = RolloutOptions::for_grid(env, f.k > 0 ? f.k : default_k(env));
    if (f.goal_threshold) opts.goal_threshold = *f.goal_threshold;
    if (f.meet_threshold) opts.meet_threshold = *f.meet_threshold;
    if (f.epsilon) opts.epsilon = *f.epsilon;
    if (f.resolution) opts.check_resolution = *f.resolution;
    if (f.max_steps) opts.max_steps = *f.max_steps;
    if (f.repair_tries) opts.repair_max_tries = *f.repair_tries;
    opts.bidirectional = f.bidirectional;
    opts.seed = seed;
    opts.validate();
    return opts;
}

void record_rollout_params(RunManifest& m, const RolloutOptions& o, int k) {
    m.parameters["k"] = std::to_string(k);
    m.parameters["goal_threshold"] = g17(o.goal_threshold);
    m.parameters["meet_threshold"] = g17(o.meet_threshold);
    m.parameters["epsilon"] = g17(o.epsilon);
    m.parameters["check_resolution"] = g17(o.check_resolution);
    m.parameters["max_steps"] = std::to_string(o.max_steps);
    m.parameters["repair_max_tries"] = std::to_string(o.repair_max_tries);
    m.parameters["bidirectional"] = o.bidirectional ? "true" : "false";
}

}  // namespace

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("ORACLENET_SEED"); env && *env) {
        char* end = nullptr;
        const auto v = std::strtoull(env, &end, 10);
        if (*end != '\0') {
            throw UsageError("ORACLENET_SEED must be an unsigned integer");
        }
        return v;
    }
    return 1;
}

int cmd_env(const EnvArgs& args) {
    const auto env = load_env(args.env_file);
    std::cout << "kind: " << (env.kind() == EnvKind::GridWorld2D ? "gridworld2d" : "planar_arm") << '\n'
              << "dimension: " << env.dim() << '\n'
              << "obstacles: " << env.obstacles().size() << '\n';
    for (int i = 0; i < env.dim(); ++i) {
        std::cout << "axis " << i << ": [" << env.bounds()[i].lo << ", " << env.bounds()[i].hi << "]\n";
    }
    // Free fraction from a fixed-seed uniform sample.
    Rng rng(mix_seed(0, 0));
    int free = 0;
    constexpr int n = 20000;
    for (int i = 0; i < n; ++i) {
        free += env.is_free(env.sample_uniform(rng)) ? 1 : 0;
    }
    std::cout << "free fraction: " << static_cast<double>(free) / n << '\n'
              << "hash: " << environment_hash(env) << '\n';
    return kOk;
}

int cmd_dataset(const DatasetArgs& args) {
    RunManifest m;
    m.command = "dataset";
    m.started_utc = utc_now_iso8601();
    const auto seed = resolve_seed(args.seed);
    if (args.k < 2) {
        throw UsageError("--k must be at least 2");
    }
    if (args.n_paths < 1) {
        throw UsageError("--paths must be positive");
    }
    const auto env = load_env(args.env_file);
    const GridGraph graph(env, args.k);
    GenerateOptions gen;
    gen.jobs = args.jobs;
    const auto report = generate_paths(graph, args.n_paths, seed, gen);
    if (report.exhausted > 0) {
        std::cerr << "warning: only " << report.paths.size() << " of " << args.n_paths
                  << " paths generated (redraw budget exhausted)\n";
    }
    write_dataset(args.out, env.dim(), report.paths);

    const auto hash = environment_hash(env);
    nlohmann::json side;
    side["env_hash"] = hash;
    side["k"] = args.k;
    side["seed"] = seed;
    side["n_paths"] = report.paths.size();
    side["skipped_unreachable"] = report.skipped;
    side["generator_version"] = kGeneratorVersion;
    write_text(args.out + ".meta.json", side.dump(2) + "\n");

    m.env_hash = hash;
    m.seeds["dataset"] = seed;
    m.parameters = {{"env_file", args.env_file},     {"k", std::to_string(args.k)},
                    {"n_paths", std::to_string(args.n_paths)}, {"out", args.out},
                    {"generator_version", kGeneratorVersion}};
    m.finished_utc = utc_now_iso8601();
    write_manifest(args.out, m);
    std::cout << "wrote " << report.paths.size() << " paths to " << args.out << " (" << report.skipped
              << " unreachable pairs redrawn)\n";
    return kOk;
}

// "4x256" for uniform stacks, "128,64" otherwise.
std::string architecture_label(const std::vector<int>& hidden) {
    if (std::adjacent_find(hidden.begin(), hidden.end(), std::not_equal_to<>()) == hidden.end()) {
        return std::to_string(hidden.size()) + "x" + std::to_string(hidden.front());
    }
    return join(hidden, ',');
}

int cmd_train(const TrainArgs& args) {
    RunManifest m;
    m.command = "train";
    m.started_utc = utc_now_iso8601();
    const auto seed = resolve_seed(args.seed);
    const auto env = load_env(args.env_file);
    int dim = 0;
    const auto paths = read_dataset(args.dataset, &dim);
    if (dim != env.dim()) {
        throw UsageError("dataset has d=" + std::to_string(dim) + " but the environment has d=" +
                         std::to_string(env.dim()));
    }
    const auto hash = environment_hash(env);
    if (fs::exists(args.dataset + ".meta.json")) {
        const auto side = nlohmann::json::parse(read_text(args.dataset + ".meta.json"), nullptr, false);
        if (!side.is_discarded() && side.value("env_hash", hash) != hash) {
            std::cerr << "warning: dataset was generated for a different environment\n";
        }
    }

    std::vector<int> hidden = args.layers;
    std::string arch_name = "explicit";
    if (hidden.empty()) {
        const auto preset = arch_preset(args.arch);
        hidden = preset.hidden;
        arch_name = preset.name;
    }
    if (args.train_fraction <= 0.0 || args.train_fraction >= 1.0) {
        throw UsageError("--train-fraction must lie in (0, 1)");
    }
    const auto split = train_test_split(paths, args.train_fraction, seed);
    if (split.degenerate) {
        std::cerr << "warning: a single path; the validation split is empty\n";
    }
    auto net = LstmNet::initialized(env.dim(), hidden, normalizer_for(env), mix_seed(seed, 1));

    TrainConfig cfg;
    cfg.epochs = args.epochs;
    cfg.batch_size = args.batch_size;
    cfg.adam.lr = args.lr;
    cfg.lr_final_fraction = args.lr_final;
    cfg.goal_hold_steps = args.goal_hold;
    cfg.seed = seed;
    std::string csv = "epoch,train_mse,val_mse\n";
    auto result = train(std::move(net), split.train, split.test, cfg, [&](const EpochLoss& e) {
        csv += std::to_string(e.epoch) + ',' + g17(e.train_mse) + ',' + g17(e.val_mse) + '\n';
        std::cerr << "epoch " << e.epoch << " train " << e.train_mse << " val " << e.val_mse << '\n';
        return true;
    });
    save_weights(result.net, args.out, args.float_width);
    const auto loss_csv = args.loss_csv.empty() ? args.out + ".loss.csv" : args.loss_csv;
    write_text(loss_csv, csv);

    m.env_hash = hash;
    m.seeds["train"] = seed;
    m.parameters = {{"dataset", args.dataset},
                    {"env_file", args.env_file},
                    {"arch_preset", arch_name},
                    {"architecture", architecture_label(hidden)},
                    {"epochs", std::to_string(args.epochs)},
                    {"batch_size", std::to_string(args.batch_size)},
                    {"lr", g17(args.lr)},
                    {"lr_final_fraction", g17(args.lr_final)},
                    {"goal_hold_steps", std::to_string(args.goal_hold)},
                    {"train_fraction", g17(args.train_fraction)},
                    {"float_width", std::to_string(args.float_width)},
                    {"train_paths", std::to_string(split.train.size())},
                    {"val_paths", std::to_string(split.test.size())},
                    {"loss_csv", loss_csv}};
    m.finished_utc = utc_now_iso8601();
    write_manifest(args.out, m);
    std::cout << "wrote " << args.out << " (" << architecture_label(hidden) << ")\n";
    return kOk;
}

int cmd_plan(const PlanArgs& args) {
    RunManifest m;
    m.command = "plan";
    m.started_utc = utc_now_iso8601();
    const auto seed = resolve_seed(args.seed);
    const auto env = load_env(args.env_file);
    const auto net = load_weights(args.weights, env.dim());
    const auto start = to_config(env, args.start, "--start");
    const auto goal = to_config(env, args.goal, "--goal");
    if (!env.is_free(start)) {
        throw DomainError("start configuration is in collision or out of bounds");
    }
    if (!env.is_free(goal)) {
        throw DomainError("goal configuration is in collision or out of bounds");
    }
    const auto opts = rollout_options(env, args.rollout, seed);
    const auto result = plan(net, env, start, goal, opts);
    const auto hash = environment_hash(env);
    write_text(args.out, rollout_to_json(result, hash));
    if (!args.svg.empty()) {
        write_text(args.svg, render_svg(env, {result.path}));
    }

    m.env_hash = hash;
    m.seeds["rollout"] = seed;
    record_rollout_params(m, opts, args.rollout.k > 0 ? args.rollout.k : default_k(env));
    m.parameters["weights"] = args.weights;
    m.parameters["env_file"] = args.env_file;
    m.finished_utc = utc_now_iso8601();
    write_manifest(args.out, m);

    std::cout << to_string(result.status) << ": " << result.path.size() << " waypoints, " << result.steps_taken
              << " steps, " << result.repairs_invoked << " repairs\n";
    if (!result.success()) {
        std::cerr << "planning failed: " << to_string(result.status) << '\n';
        return kDomain;
    }
    return kOk;
}

int cmd_bench(const BenchArgs& args) {
    RunManifest m;
    m.command = "bench";
    m.started_utc = utc_now_iso8601();
    const auto seed = resolve_seed(args.seed);
    if (args.n_trials < 1) {
        throw UsageError("--trials must be positive");
    }
    if (args.planners.empty()) {
        throw UsageError("--planners must name at least one planner");
    }
    const auto env = load_env(args.env_file);
    const int k = args.rollout.k > 0 ? args.rollout.k : default_k(env);
    const auto ropts = rollout_options(env, args.rollout, seed);

    std::vector<PlannerKind> kinds;
    for (const auto& name : args.planners) {
        kinds.push_back(planner_from_string(name));
    }
    std::optional<LstmNet> net;
    std::optional<GridGraph> graph;
    std::vector<Planner> planners;
    auto rrt = RrtStarOptions::for_grid(env, k);
    rrt.max_iterations = args.rrt_iterations;
    for (const auto kind : kinds) {
        switch (kind) {
            case PlannerKind::OracleNet:
                if (args.weights.empty()) {
                    throw UsageError("planner oraclenet needs --weights");
                }
                if (!net) net.emplace(load_weights(args.weights, env.dim()));
                planners.push_back(make_oraclenet_planner(*net, env, ropts));
                break;
            case PlannerKind::AStar:
                if (!graph) graph.emplace(env, k);
                planners.push_back(make_astar_planner(*graph, ropts.check_resolution));
                break;
            case PlannerKind::RrtStar:
                planners.push_back(make_rrt_star_planner(env, rrt));
                break;
        }
    }

    const auto env_id = fs::path(args.env_file).stem().string();
    const auto records = run_suite(env, env_id, planners, args.n_trials, seed, args.jobs);
    const auto report = summarize(records);

    std::map<std::string, std::string> params{{"env_file", args.env_file},
                                              {"planners", [&] {
                                                   std::string s;
                                                   for (std::size_t i = 0; i < args.planners.size(); ++i) {
                                                       s += (i ? "," : "") + args.planners[i];
                                                   }
                                                   return s;
                                               }()},
                                              {"n_trials", std::to_string(args.n_trials)},
                                              {"seed", std::to_string(seed)},
                                              {"rrt_iterations", std::to_string(rrt.max_iterations)},
                                              {"rrt_step_size", g17(rrt.step_size)},
                                              {"rrt_goal_bias", g17(rrt.goal_bias)},
                                              {"jobs", std::to_string(args.jobs)}};
    m.parameters = params;
    record_rollout_params(m, ropts, k);
    for (const auto& [key, value] : m.parameters) {
        params.emplace(key, value);
    }

    const fs::path dir(args.out_dir);
    fs::create_directories(dir);
    const auto records_file = (dir / "records.csv").string();
    write_text(records_file, records_csv(records));
    write_text((dir / "ratios.csv").string(), ratios_csv(report));
    write_text((dir / "histogram.csv").string(), histogram_csv(report));
    write_text((dir / "scatter.csv").string(), scatter_csv(report));
    write_text((dir / "summary.md").string(), summary_markdown(report, env_id, params));

    m.env_hash = environment_hash(env);
    m.seeds["queries"] = seed;
    if (!args.weights.empty()) m.parameters["weights"] = args.weights;
    m.finished_utc = utc_now_iso8601();
    write_manifest(records_file, m);

    for (const auto& s : report.planners) {
        std::cout << to_string(s.planner) << ": success " << s.successes << '/' << s.trials << ", time "
                  << s.time_mean << " s\n";
    }
    for (const auto& r : report.ratios) {
        std::cout << to_string(r.numerator) << '/' << to_string(r.denominator) << " length ratio " << r.mean
                  << " (" << r.std << ")\n";
    }
    return kOk;
}

int cmd_plot(const PlotArgs& args) {
    const auto env = load_env(args.env_file);
    const auto bytes = read_text(args.input);
    std::vector<Path> paths;
    if (bytes.rfind("ONDS", 0) == 0) {
        int dim = 0;
        const auto corpus = decode_dataset(bytes, &dim);
        if (dim != env.dim()) {
            throw UsageError("dataset dimension does not match the environment");
        }
        for (std::size_t i = 0; i < corpus.size() && static_cast<int>(i) < args.max_paths; ++i) {
            paths.push_back(corpus[i].waypoints);
        }
    } else {
        const auto doc = path_document_from_json(bytes);
        for (const auto& q : doc.waypoints) {
            if (q.size() != env.dim()) {
                throw UsageError("path dimension does not match the environment");
            }
        }
        paths.push_back(doc.waypoints);
    }
    write_text(args.out, render_svg(env, paths));

    RunManifest m;
    m.command = "plot";
    m.started_utc = m.finished_utc = utc_now_iso8601();
    m.env_hash = environment_hash(env);
    m.parameters = {{"env_file", args.env_file}, {"input", args.input}, {"max_paths", std::to_string(args.max_paths)}};
    write_manifest(args.out, m);
    std::cout << "wrote " << args.out << '\n';
    return kOk;
}

}  // namespace oraclenet::cli
