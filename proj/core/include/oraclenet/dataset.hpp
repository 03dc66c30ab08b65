#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oraclenet/search.hpp"

namespace oraclenet {

enum class PathSource : std::uint8_t { AStar };

/// Expert demonstration: free waypoints, consecutive pairs valid grid edges.
struct OraclePath {
    Path waypoints;
    PathSource source = PathSource::AStar;
};

/// One supervised transition: input [x(t), x(tau)] -> target x(t+1).
struct TrainingSample {
    Eigen::VectorXd input;
    Config target;
    std::int64_t path_id = 0;
    std::int64_t step_index = 0;
};

struct GenerateOptions {
    /// Draws per path before a query slot gives up.
    int redraw_budget = 100;
    /// Worker threads; results do not depend on this.
    int jobs = 1;
};

struct GenerateReport {
    std::vector<OraclePath> paths;
    /// Unreachable pairs that were skipped and redrawn.
    std::int64_t skipped = 0;
    /// Query slots that ran out of redraws; nonzero means a partial corpus.
    std::int64_t exhausted = 0;
};

/// A* demonstrations between uniformly drawn distinct free nodes.
///
/// Query i draws from an rng seeded by mix_seed(seed, i), so the corpus only
/// depends on (graph, n_paths, seed) and not on the number of workers.
[[nodiscard]] GenerateReport generate_paths(const GridGraph& graph, std::int64_t n_paths, std::uint64_t seed,
                                            const GenerateOptions& opts = {});

/// tau+1 waypoints produce tau samples; throws UsageError on a path shorter than 2.
[[nodiscard]] std::vector<TrainingSample> split_paths(const std::vector<OraclePath>& paths);

struct PathSplit {
    std::vector<OraclePath> train;
    std::vector<OraclePath> test;
    bool degenerate = false;
};

/// Path-granular split: round(fraction * n) paths train, the rest test.
/// With one path the test side is empty and `degenerate` is set.
[[nodiscard]] PathSplit train_test_split(const std::vector<OraclePath>& paths, double train_fraction,
                                         std::uint64_t seed);

/// Sample-level overload; keeps every path's samples on one side.
[[nodiscard]] std::pair<std::vector<TrainingSample>, std::vector<TrainingSample>> train_test_split(
    const std::vector<TrainingSample>& samples, double train_fraction, std::uint64_t seed);

/// Binary corpus: "ONDS", u32 version=1, u32 d, u64 count, then per path
/// u32 waypoint count and row-major f64 waypoints. Little-endian.
void write_dataset(const std::string& file, int dim, const std::vector<OraclePath>& paths);
[[nodiscard]] std::vector<OraclePath> read_dataset(const std::string& file, int* dim_out = nullptr);

std::string encode_dataset(int dim, const std::vector<OraclePath>& paths);
std::vector<OraclePath> decode_dataset(const std::string& bytes, int* dim_out = nullptr);

}  // namespace oraclenet
