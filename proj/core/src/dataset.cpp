#include "oraclenet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "binary_io.hpp"

namespace oraclenet {

namespace detail {

std::string read_file(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw UsageError("cannot open '" + file + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& file, const std::string& bytes) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw UsageError("cannot write '" + file + "'");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw UsageError("short write to '" + file + "'");
    }
}

}  // namespace detail

namespace {

constexpr std::string_view kDatasetMagic = "ONDS";
constexpr std::uint32_t kDatasetVersion = 1;

struct Slot {
    std::optional<OraclePath> path;
    std::int64_t skipped = 0;
};

Slot run_query(const GridGraph& graph, std::uint64_t seed, std::int64_t index, int budget) {
    Slot slot;
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(index)));
    const auto& free = graph.free_nodes();
    const auto n = static_cast<std::uint64_t>(free.size());
    for (int attempt = 0; attempt < budget; ++attempt) {
        const auto ia = uniform_index(rng, n);
        auto ib = uniform_index(rng, n - 1);
        if (ib >= ia) {
            ++ib;
        }
        auto found = astar(graph, free[ia], free[ib]);
        if (!found) {
            ++slot.skipped;
            continue;
        }
        slot.path = OraclePath{to_configs(graph, found->nodes), PathSource::AStar};
        return slot;
    }
    return slot;
}

}  // namespace

GenerateReport generate_paths(const GridGraph& graph, std::int64_t n_paths, std::uint64_t seed,
                              const GenerateOptions& opts) {
    if (graph.free_count() < 2) {
        throw DomainError("need at least two free nodes to draw oracle queries");
    }
    if (n_paths < 0) {
        throw UsageError("n_paths must be non-negative");
    }
    std::vector<Slot> slots(static_cast<std::size_t>(n_paths));
    const int jobs = std::max(1, opts.jobs);
    auto worker = [&](int w) {
        for (std::int64_t i = w; i < n_paths; i += jobs) {
            slots[i] = run_query(graph, seed, i, opts.redraw_budget);
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < jobs; ++w) {
            pool.emplace_back(worker, w);
        }
    }

    GenerateReport report;
    report.paths.reserve(slots.size());
    for (auto& s : slots) {
        report.skipped += s.skipped;
        if (s.path) {
            report.paths.push_back(std::move(*s.path));
        } else {
            ++report.exhausted;
        }
    }
    return report;
}

std::vector<TrainingSample> split_paths(const std::vector<OraclePath>& paths) {
    std::vector<TrainingSample> out;
    for (std::size_t p = 0; p < paths.size(); ++p) {
        const auto& w = paths[p].waypoints;
        if (w.size() < 2) {
            throw UsageError("path " + std::to_string(p) + " has fewer than 2 waypoints");
        }
        const Config& goal = w.back();
        const auto d = goal.size();
        for (std::size_t t = 0; t + 1 < w.size(); ++t) {
            TrainingSample s;
            s.input.resize(2 * d);
            s.input << w[t], goal;
            s.target = w[t + 1];
            s.path_id = static_cast<std::int64_t>(p);
            s.step_index = static_cast<std::int64_t>(t);
            out.push_back(std::move(s));
        }
    }
    return out;
}

namespace {

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n, double fraction,
                                                                            std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw UsageError("train_fraction must lie strictly between 0 and 1");
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    Rng rng(mix_seed(seed, 0x5717));
    for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[uniform_index(rng, i)]);
    }
    auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    if (n > 0) {
        n_train = std::clamp<std::size_t>(n_train, 1, n);
    }
    std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {train, test};
}

}  // namespace

PathSplit train_test_split(const std::vector<OraclePath>& paths, double train_fraction, std::uint64_t seed) {
    auto [train, test] = split_indices(paths.size(), train_fraction, seed);
    PathSplit out;
    for (auto i : train) {
        out.train.push_back(paths[i]);
    }
    for (auto i : test) {
        out.test.push_back(paths[i]);
    }
    out.degenerate = out.test.empty();
    return out;
}

std::pair<std::vector<TrainingSample>, std::vector<TrainingSample>> train_test_split(
    const std::vector<TrainingSample>& samples, double train_fraction, std::uint64_t seed) {
    std::map<std::int64_t, std::size_t> slot_of;
    for (const auto& s : samples) {
        slot_of.emplace(s.path_id, 0);
    }
    std::size_t next = 0;
    for (auto& [id, slot] : slot_of) {
        slot = next++;
    }
    auto [train, test] = split_indices(slot_of.size(), train_fraction, seed);
    std::vector<std::uint8_t> is_train(slot_of.size(), 0);
    for (auto i : train) {
        is_train[i] = 1;
    }
    std::pair<std::vector<TrainingSample>, std::vector<TrainingSample>> out;
    for (const auto& s : samples) {
        (is_train[slot_of.at(s.path_id)] ? out.first : out.second).push_back(s);
    }
    return out;
}

std::string encode_dataset(int dim, const std::vector<OraclePath>& paths) {
    detail::ByteWriter w;
    w.raw(kDatasetMagic);
    w.le(kDatasetVersion);
    w.le(static_cast<std::uint32_t>(dim));
    w.le(static_cast<std::uint64_t>(paths.size()));
    for (const auto& p : paths) {
        w.le(static_cast<std::uint32_t>(p.waypoints.size()));
        for (const auto& q : p.waypoints) {
            if (q.size() != dim) {
                throw UsageError("waypoint dimension does not match dataset dimension");
            }
            for (int i = 0; i < dim; ++i) {
                w.le(q[i]);
            }
        }
    }
    return w.take();
}

std::vector<OraclePath> decode_dataset(const std::string& bytes, int* dim_out) {
    detail::ByteReader r(bytes, "dataset");
    if (r.raw(4) != kDatasetMagic) {
        throw FormatError("dataset: bad magic");
    }
    if (const auto v = r.le<std::uint32_t>(); v != kDatasetVersion) {
        throw FormatError("dataset: unsupported version " + std::to_string(v));
    }
    const auto dim = r.le<std::uint32_t>();
    if (dim == 0) {
        throw FormatError("dataset: zero dimension");
    }
    const auto count = r.le<std::uint64_t>();
    std::vector<OraclePath> paths;
    for (std::uint64_t p = 0; p < count; ++p) {
        const auto n = r.le<std::uint32_t>();
        if (static_cast<std::uint64_t>(n) * dim * 8 > r.remaining()) {
            throw FormatError("dataset: truncated file");
        }
        OraclePath path;
        path.waypoints.reserve(n);
        for (std::uint32_t k = 0; k < n; ++k) {
            Config q(dim);
            for (std::uint32_t i = 0; i < dim; ++i) {
                q[i] = r.le<double>();
            }
            path.waypoints.push_back(std::move(q));
        }
        paths.push_back(std::move(path));
    }
    if (r.remaining() != 0) {
        throw FormatError("dataset: trailing bytes");
    }
    if (dim_out) {
        *dim_out = static_cast<int>(dim);
    }
    return paths;
}

void write_dataset(const std::string& file, int dim, const std::vector<OraclePath>& paths) {
    detail::write_file(file, encode_dataset(dim, paths));
}

std::vector<OraclePath> read_dataset(const std::string& file, int* dim_out) {
    return decode_dataset(detail::read_file(file), dim_out);
}

}  // namespace oraclenet
