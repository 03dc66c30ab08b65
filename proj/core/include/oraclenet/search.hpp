#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "oraclenet/env.hpp"

namespace oraclenet {

/// Linear lattice id. Axis 0 is most significant, so id order equals
/// lexicographic order of the d-tuple index.
using NodeId = std::int64_t;

/// Uniform k^d lattice over the environment bounds with a free-node bitmap.
///
/// Edges join lattice points differing by at most one step per axis, and only
/// when Environment::edge_free accepts the segment at half the grid spacing.
class GridGraph {
public:
    static constexpr std::int64_t kDefaultNodeCap = 10'000'000;

    /// Throws UsageError for k < 2 or when k^d exceeds node_cap, DomainError when no node is free.
    GridGraph(const Environment& env, int nodes_per_axis, std::int64_t node_cap = kDefaultNodeCap);

    [[nodiscard]] const Environment& env() const noexcept { return *env_; }
    [[nodiscard]] int dim() const noexcept { return env_->dim(); }
    [[nodiscard]] int nodes_per_axis() const noexcept { return k_; }
    [[nodiscard]] std::int64_t node_count() const noexcept { return total_; }
    [[nodiscard]] std::int64_t free_count() const noexcept { return static_cast<std::int64_t>(free_list_.size()); }
    [[nodiscard]] const std::vector<NodeId>& free_nodes() const noexcept { return free_list_; }
    [[nodiscard]] const Eigen::VectorXd& spacing() const noexcept { return spacing_; }
    [[nodiscard]] double min_spacing() const noexcept { return spacing_.minCoeff(); }
    /// Resolution used for edge validation.
    [[nodiscard]] double edge_resolution() const noexcept { return 0.5 * min_spacing(); }

    [[nodiscard]] bool is_free(NodeId id) const { return id >= 0 && id < total_ && free_[id] != 0; }
    [[nodiscard]] Config config(NodeId id) const;
    [[nodiscard]] std::vector<int> index(NodeId id) const;
    [[nodiscard]] NodeId id(const std::vector<int>& index) const;

    /// Valid (3^d - 1)-connected neighbours, ascending id order.
    [[nodiscard]] std::vector<NodeId> neighbors(NodeId node) const;

    /// Nearest free node by Euclidean distance; ties go to the smaller id.
    [[nodiscard]] NodeId nearest_node(const Config& q) const;

private:
    const Environment* env_;
    int k_;
    std::int64_t total_;
    Eigen::VectorXd lo_;
    Eigen::VectorXd spacing_;
    std::vector<std::int64_t> stride_;
    std::vector<std::uint8_t> free_;
    std::vector<NodeId> free_list_;
    std::vector<std::vector<int>> offsets_;
};

struct GridPath {
    std::vector<NodeId> nodes;
    double cost = 0.0;
};

/// Optimal path under the graph metric with a Euclidean heuristic, or nullopt when
/// goal is unreachable. Throws UsageError when start or goal is not a free node.
///
/// Open-list ties are broken by smaller g, then smaller id.
[[nodiscard]] std::optional<GridPath> astar(const GridGraph& graph, NodeId start, NodeId goal);

/// Euclidean distance computed from lattice offsets, so every edge of one move
/// type has a bit-identical length.
[[nodiscard]] double lattice_distance(const GridGraph& graph, NodeId a, NodeId b);

/// Sum of edge lengths in ascending order, so equal-cost paths with the same
/// multiset of moves report bit-identical costs regardless of move order.
[[nodiscard]] double canonical_cost(const GridGraph& graph, const std::vector<NodeId>& nodes);

[[nodiscard]] Path to_configs(const GridGraph& graph, const std::vector<NodeId>& nodes);

}  // namespace oraclenet
