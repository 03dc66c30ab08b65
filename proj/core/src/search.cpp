#include "oraclenet/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace oraclenet {

GridGraph::GridGraph(const Environment& env, int nodes_per_axis, std::int64_t node_cap)
    : env_(&env), k_(nodes_per_axis), total_(1) {
    if (k_ < 2) {
        throw UsageError("nodes_per_axis must be at least 2");
    }
    const int d = env.dim();
    for (int i = 0; i < d; ++i) {
        if (total_ > node_cap / k_) {
            throw UsageError("grid of " + std::to_string(k_) + "^" + std::to_string(d) +
                             " nodes exceeds the node cap of " + std::to_string(node_cap));
        }
        total_ *= k_;
    }
    lo_ = env.lower();
    spacing_ = (env.upper() - env.lower()) / static_cast<double>(k_ - 1);
    stride_.assign(d, 1);
    for (int i = d - 2; i >= 0; --i) {
        stride_[i] = stride_[i + 1] * k_;
    }

    free_.assign(static_cast<std::size_t>(total_), 0);
    for (NodeId id = 0; id < total_; ++id) {
        if (env.is_free(config(id))) {
            free_[id] = 1;
            free_list_.push_back(id);
        }
    }
    if (free_list_.empty()) {
        throw DomainError("grid has no free nodes");
    }

    // All offsets in {-1,0,1}^d except zero, in lexicographic order.
    std::vector<int> off(d, -1);
    while (true) {
        if (std::any_of(off.begin(), off.end(), [](int v) { return v != 0; })) {
            offsets_.push_back(off);
        }
        int axis = d - 1;
        while (axis >= 0 && off[axis] == 1) {
            off[axis] = -1;
            --axis;
        }
        if (axis < 0) {
            break;
        }
        ++off[axis];
    }
}

Config GridGraph::config(NodeId id) const {
    const int d = dim();
    Config q(d);
    for (int i = 0; i < d; ++i) {
        const auto idx = (id / stride_[i]) % k_;
        // Pin the last lattice point to the upper bound exactly.
        q[i] = idx == k_ - 1 ? env_->bounds()[i].hi : lo_[i] + static_cast<double>(idx) * spacing_[i];
    }
    return q;
}

std::vector<int> GridGraph::index(NodeId id) const {
    std::vector<int> out(dim());
    for (int i = 0; i < dim(); ++i) {
        out[i] = static_cast<int>((id / stride_[i]) % k_);
    }
    return out;
}

NodeId GridGraph::id(const std::vector<int>& index) const {
    NodeId out = 0;
    for (int i = 0; i < dim(); ++i) {
        out += static_cast<NodeId>(index[i]) * stride_[i];
    }
    return out;
}

std::vector<NodeId> GridGraph::neighbors(NodeId node) const {
    std::vector<NodeId> out;
    if (!is_free(node)) {
        return out;
    }
    const auto base = index(node);
    const Config from = config(node);
    const double res = edge_resolution();
    for (const auto& off : offsets_) {
        NodeId nb = 0;
        bool inside = true;
        for (int i = 0; i < dim(); ++i) {
            const int v = base[i] + off[i];
            if (v < 0 || v >= k_) {
                inside = false;
                break;
            }
            nb += static_cast<NodeId>(v) * stride_[i];
        }
        if (inside && free_[nb] && env_->edge_free(from, config(nb), res)) {
            out.push_back(nb);
        }
    }
    return out;
}

NodeId GridGraph::nearest_node(const Config& q) const {
    const int d = dim();
    if (q.size() != d) {
        throw UsageError("query dimension does not match the grid");
    }
    std::vector<int> cell(d);
    for (int i = 0; i < d; ++i) {
        const double u = (q[i] - lo_[i]) / spacing_[i];
        cell[i] = static_cast<int>(std::clamp(std::floor(u), 0.0, static_cast<double>(k_ - 1)));
    }
    const double s = min_spacing();
    for (int r = 0;; ++r) {
        NodeId best = -1;
        double best_d2 = std::numeric_limits<double>::infinity();
        // Scan the box [cell - r, cell + r + 1] per axis in lexicographic order.
        std::vector<int> lo(d), hi(d), cur(d);
        bool covers_all = true;
        for (int i = 0; i < d; ++i) {
            lo[i] = std::max(0, cell[i] - r);
            hi[i] = std::min(k_ - 1, cell[i] + r + 1);
            covers_all = covers_all && lo[i] == 0 && hi[i] == k_ - 1;
        }
        cur = lo;
        while (true) {
            const NodeId nid = id(cur);
            if (free_[nid]) {
                const double d2 = (config(nid) - q).squaredNorm();
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = nid;
                }
            }
            int axis = d - 1;
            while (axis >= 0 && cur[axis] == hi[axis]) {
                cur[axis] = lo[axis];
                --axis;
            }
            if (axis < 0) {
                break;
            }
            ++cur[axis];
        }
        // Nodes outside the box lie at least (r + 1) * s away; strict test keeps ties exact.
        const double bound = static_cast<double>(r + 1) * s;
        if (covers_all || (best >= 0 && best_d2 < bound * bound)) {
            return best;
        }
    }
}

double lattice_distance(const GridGraph& graph, NodeId a, NodeId b) {
    const auto ia = graph.index(a);
    const auto ib = graph.index(b);
    double sum = 0.0;
    for (int i = 0; i < graph.dim(); ++i) {
        const double delta = static_cast<double>(ib[i] - ia[i]) * graph.spacing()[i];
        sum += delta * delta;
    }
    return std::sqrt(sum);
}

double canonical_cost(const GridGraph& graph, const std::vector<NodeId>& nodes) {
    std::vector<double> edges;
    edges.reserve(nodes.size());
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        edges.push_back(lattice_distance(graph, nodes[i - 1], nodes[i]));
    }
    std::sort(edges.begin(), edges.end());
    double total = 0.0;
    for (double e : edges) {
        total += e;
    }
    return total;
}

std::optional<GridPath> astar(const GridGraph& graph, NodeId start, NodeId goal) {
    if (!graph.is_free(start) || !graph.is_free(goal)) {
        throw UsageError("astar endpoints must be free grid nodes");
    }
    if (start == goal) {
        return GridPath{{start}, 0.0};
    }
    struct Entry {
        double f;
        double g;
        NodeId id;
    };
    struct Worse {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.f != b.f) return a.f > b.f;
            if (a.g != b.g) return a.g > b.g;
            return a.id > b.id;
        }
    };

    const auto n = static_cast<std::size_t>(graph.node_count());
    std::vector<double> g(n, std::numeric_limits<double>::infinity());
    std::vector<NodeId> parent(n, -1);
    std::vector<std::uint8_t> closed(n, 0);

    std::priority_queue<Entry, std::vector<Entry>, Worse> open;
    g[start] = 0.0;
    open.push({lattice_distance(graph, start, goal), 0.0, start});
    while (!open.empty()) {
        const Entry top = open.top();
        open.pop();
        if (closed[top.id] || top.g > g[top.id]) {
            continue;
        }
        if (top.id == goal) {
            GridPath out;
            for (NodeId v = goal; v != -1; v = parent[v]) {
                out.nodes.push_back(v);
            }
            std::reverse(out.nodes.begin(), out.nodes.end());
            out.cost = canonical_cost(graph, out.nodes);
            return out;
        }
        closed[top.id] = 1;
        for (NodeId nb : graph.neighbors(top.id)) {
            if (closed[nb]) {
                continue;
            }
            const double cand = top.g + lattice_distance(graph, top.id, nb);
            if (cand < g[nb]) {
                g[nb] = cand;
                parent[nb] = top.id;
                open.push({cand + lattice_distance(graph, nb, goal), cand, nb});
            }
        }
    }
    return std::nullopt;
}

Path to_configs(const GridGraph& graph, const std::vector<NodeId>& nodes) {
    Path out;
    out.reserve(nodes.size());
    for (NodeId v : nodes) {
        out.push_back(graph.config(v));
    }
    return out;
}

}  // namespace oraclenet
