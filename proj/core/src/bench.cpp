#include "oraclenet/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <thread>

namespace oraclenet {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string fmt_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string display_name(PlannerKind kind) {
    switch (kind) {
        case PlannerKind::OracleNet: return "OracleNet";
        case PlannerKind::AStar: return "A*";
        case PlannerKind::RrtStar: return "RRT*";
    }
    return "?";
}

}  // namespace

std::string to_string(PlannerKind kind) {
    switch (kind) {
        case PlannerKind::OracleNet: return "oraclenet";
        case PlannerKind::AStar: return "astar";
        case PlannerKind::RrtStar: return "rrtstar";
    }
    return "unknown";
}

PlannerKind planner_from_string(const std::string& name) {
    if (name == "oraclenet") return PlannerKind::OracleNet;
    if (name == "astar") return PlannerKind::AStar;
    if (name == "rrtstar" || name == "rrt_star") return PlannerKind::RrtStar;
    throw UsageError("unknown planner '" + name + "' (expected oraclenet, astar or rrtstar)");
}

Planner make_oraclenet_planner(const LstmNet& net, const Environment& env, RolloutOptions opts) {
    return {PlannerKind::OracleNet, [&net, &env, opts](const Config& s, const Config& g, std::uint64_t seed) {
                RolloutOptions o = opts;
                o.seed = seed;
                return plan(net, env, s, g, o);
            }};
}

Planner make_astar_planner(const GridGraph& graph, double check_resolution) {
    return {PlannerKind::AStar, [&graph, check_resolution](const Config& s, const Config& g, std::uint64_t) {
                return astar_plan(graph, s, g, check_resolution);
            }};
}

Planner make_rrt_star_planner(const Environment& env, RrtStarOptions opts) {
    return {PlannerKind::RrtStar, [&env, opts](const Config& s, const Config& g, std::uint64_t seed) {
                RrtStarOptions o = opts;
                o.seed = seed;
                return rrt_star(env, s, g, o);
            }};
}

std::vector<Query> draw_queries(const Environment& env, int n, std::uint64_t seed) {
    std::vector<Query> out;
    out.reserve(static_cast<std::size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
        Query q{env.sample_free(rng), env.sample_free(rng)};
        while (q.goal == q.start) {
            q.goal = env.sample_free(rng);
        }
        out.push_back(std::move(q));
    }
    return out;
}

std::vector<BenchTrial> run_suite_detailed(const Environment& env, const std::string& env_id,
                                           const std::vector<Planner>& planners, const std::vector<Query>& queries,
                                           std::uint64_t seed, int jobs) {
    if (planners.empty()) {
        throw UsageError("run_suite needs at least one planner");
    }
    const std::size_t n = queries.size();
    std::vector<BenchTrial> trials(n * planners.size());
    auto run_trial = [&](std::size_t t) {
        for (std::size_t p = 0; p < planners.size(); ++p) {
            const auto& q = queries[t];
            const auto t0 = std::chrono::steady_clock::now();
            RolloutResult res = planners[p].run(q.start, q.goal, mix_seed(seed ^ 0xbe7c4, t));
            const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            BenchRecord rec;
            rec.trial_id = static_cast<int>(t);
            rec.planner = planners[p].kind;
            rec.env_id = env_id;
            rec.start = q.start;
            rec.goal = q.goal;
            rec.success = res.success();
            rec.wall_time = wall;
            if (rec.success) {
                rec.path_length = path_length(res.path);
            }
            rec.steps = res.steps_taken;
            trials[t * planners.size() + p] = BenchTrial{std::move(rec), std::move(res)};
        }
    };
    (void)env;
    const int workers = std::max(1, jobs);
    if (workers == 1) {
        for (std::size_t t = 0; t < n; ++t) {
            run_trial(t);
        }
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t t = static_cast<std::size_t>(w); t < n; t += static_cast<std::size_t>(workers)) {
                    run_trial(t);
                }
            });
        }
    }
    return trials;
}

std::vector<BenchRecord> run_suite(const Environment& env, const std::string& env_id,
                                   const std::vector<Planner>& planners, int n_trials, std::uint64_t seed, int jobs) {
    const auto queries = draw_queries(env, n_trials, seed);
    auto trials = run_suite_detailed(env, env_id, planners, queries, seed, jobs);
    std::vector<BenchRecord> out;
    out.reserve(trials.size());
    for (auto& t : trials) {
        out.push_back(std::move(t.record));
    }
    return out;
}

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd out;
    if (values.empty()) {
        return out;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) {
            sq += (v - out.mean) * (v - out.mean);
        }
        out.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return out;
}

const PlannerSummary* BenchReport::find(PlannerKind kind) const {
    for (const auto& p : planners) {
        if (p.planner == kind) {
            return &p;
        }
    }
    return nullptr;
}

const RatioSummary* BenchReport::find_ratio(PlannerKind num, PlannerKind den) const {
    for (const auto& r : ratios) {
        if (r.numerator == num && r.denominator == den) {
            return &r;
        }
    }
    return nullptr;
}

BenchReport summarize(const std::vector<BenchRecord>& records, int histogram_bins) {
    BenchReport report;
    std::vector<PlannerKind> kinds;
    for (const auto& r : records) {
        if (std::find(kinds.begin(), kinds.end(), r.planner) == kinds.end()) {
            kinds.push_back(r.planner);
        }
    }
    std::sort(kinds.begin(), kinds.end());

    // (planner, trial) -> length for successful trials.
    std::map<std::pair<PlannerKind, int>, double> lengths;
    for (PlannerKind k : kinds) {
        PlannerSummary s;
        s.planner = k;
        std::vector<double> times;
        std::vector<double> lens;
        for (const auto& r : records) {
            if (r.planner != k) {
                continue;
            }
            ++s.trials;
            if (r.success) {
                ++s.successes;
                times.push_back(r.wall_time);
                if (r.path_length) {
                    lens.push_back(*r.path_length);
                    lengths[{k, r.trial_id}] = *r.path_length;
                    report.scatter.push_back({k, r.trial_id, *r.path_length, r.wall_time, r.steps});
                }
            }
        }
        s.success_rate = s.trials > 0 ? static_cast<double>(s.successes) / s.trials : 0.0;
        const auto t = mean_std(times);
        const auto l = mean_std(lens);
        s.time_mean = t.mean;
        s.time_std = t.std;
        s.length_mean = l.mean;
        s.length_std = l.std;
        report.planners.push_back(s);

        Histogram h;
        h.planner = k;
        if (!times.empty() && histogram_bins > 0) {
            const auto [lo_it, hi_it] = std::minmax_element(times.begin(), times.end());
            const double lo = *lo_it;
            const double hi = *hi_it > lo ? *hi_it : lo + 1e-9;
            for (int b = 0; b <= histogram_bins; ++b) {
                h.edges.push_back(lo + (hi - lo) * b / histogram_bins);
            }
            h.counts.assign(static_cast<std::size_t>(histogram_bins), 0);
            for (double v : times) {
                auto b = static_cast<int>((v - lo) / (hi - lo) * histogram_bins);
                ++h.counts[static_cast<std::size_t>(std::clamp(b, 0, histogram_bins - 1))];
            }
        }
        report.histograms.push_back(std::move(h));
    }

    for (PlannerKind num : kinds) {
        for (PlannerKind den : kinds) {
            if (num == den) {
                continue;
            }
            RatioSummary rs;
            rs.numerator = num;
            rs.denominator = den;
            std::set<int> trial_ids;
            for (const auto& [key, len] : lengths) {
                if (key.first == num) {
                    trial_ids.insert(key.second);
                }
            }
            std::vector<double> values;
            for (int t : trial_ids) {
                const auto it = lengths.find({den, t});
                if (it == lengths.end() || it->second == 0.0) {
                    continue;
                }
                const double ratio = lengths.at({num, t}) / it->second;
                rs.ratios.emplace_back(t, ratio);
                values.push_back(ratio);
            }
            const auto ms = mean_std(values);
            rs.mean = ms.mean;
            rs.std = ms.std;
            report.ratios.push_back(std::move(rs));
        }
    }
    return report;
}

std::string records_csv(const std::vector<BenchRecord>& records) {
    std::ostringstream out;
    out << "trial_id,planner,env_id,success,wall_time_s,path_length,steps\n";
    for (const auto& r : records) {
        out << r.trial_id << ',' << to_string(r.planner) << ',' << r.env_id << ',' << (r.success ? 1 : 0) << ','
            << fmt(r.wall_time) << ',' << (r.path_length ? fmt(*r.path_length) : std::string()) << ',' << r.steps
            << '\n';
    }
    return out.str();
}

std::string ratios_csv(const BenchReport& report) {
    std::ostringstream out;
    out << "trial_id,numerator,denominator,ratio\n";
    for (const auto& rs : report.ratios) {
        for (const auto& [t, v] : rs.ratios) {
            out << t << ',' << to_string(rs.numerator) << ',' << to_string(rs.denominator) << ',' << fmt(v) << '\n';
        }
    }
    return out.str();
}

std::string histogram_csv(const BenchReport& report) {
    std::ostringstream out;
    out << "planner,bin_lo_s,bin_hi_s,count\n";
    for (const auto& h : report.histograms) {
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
            out << to_string(h.planner) << ',' << fmt(h.edges[b]) << ',' << fmt(h.edges[b + 1]) << ',' << h.counts[b]
                << '\n';
        }
    }
    return out.str();
}

std::string scatter_csv(const BenchReport& report) {
    std::ostringstream out;
    out << "planner,trial_id,path_length,wall_time_s,steps\n";
    for (const auto& p : report.scatter) {
        out << to_string(p.planner) << ',' << p.trial_id << ',' << fmt(p.path_length) << ',' << fmt(p.wall_time)
            << ',' << p.steps << '\n';
    }
    return out.str();
}

std::string summary_markdown(const BenchReport& report, const std::string& env_id,
                             const std::map<std::string, std::string>& parameters) {
    auto cell = [](double mean, double sd, int digits) {
        return fmt_fixed(mean, digits) + " (" + fmt_fixed(sd, digits) + ")";
    };
    std::ostringstream out;
    out << "## Benchmark: " << env_id << "\n\n";
    out << "Values are mean (sample standard deviation). Times cover successful trials only; "
           "ratios cover queries where both planners succeeded.\n\n";

    std::vector<PlannerKind> present;
    for (const auto& p : report.planners) {
        present.push_back(p.planner);
    }
    out << "| Environment |";
    for (PlannerKind k : present) {
        out << ' ' << display_name(k) << " (s) |";
    }
    std::vector<const RatioSummary*> ratio_cols;
    for (PlannerKind den : present) {
        if (den == PlannerKind::OracleNet) {
            continue;
        }
        if (const auto* rs = report.find_ratio(PlannerKind::OracleNet, den)) {
            ratio_cols.push_back(rs);
            out << " OracleNet / " << display_name(den) << " |";
        }
    }
    out << "\n|---|";
    for (std::size_t i = 0; i < present.size() + ratio_cols.size(); ++i) {
        out << "---|";
    }
    out << "\n| " << env_id << " |";
    for (const auto& p : report.planners) {
        out << ' ' << cell(p.time_mean, p.time_std, 4) << " |";
    }
    for (const auto* rs : ratio_cols) {
        out << ' ' << cell(rs->mean, rs->std, 3) << " |";
    }
    out << "\n\n| Planner | Trials | Successes | Success rate | Path length |\n|---|---|---|---|---|\n";
    for (const auto& p : report.planners) {
        out << "| " << display_name(p.planner) << " | " << p.trials << " | " << p.successes << " | "
            << fmt_fixed(100.0 * p.success_rate, 1) << "% | " << cell(p.length_mean, p.length_std, 3) << " |\n";
    }
    if (!parameters.empty()) {
        out << "\n### Parameters\n\n";
        for (const auto& [k, v] : parameters) {
            out << "- " << k << ": " << v << '\n';
        }
    }
    return out.str();
}

}  // namespace oraclenet
