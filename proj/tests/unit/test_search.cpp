#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include <gtest/gtest.h>

#include "oraclenet/search.hpp"
#include "oracle_util.hpp"
#include "test_util.hpp"

using namespace oraclenet;
using oraclenet::test::cfg;
using oraclenet::test::dijkstra_cost;

namespace {

// Reference lattice coordinate, computed independently of GridGraph.
Config lattice_config(const Environment& env, int k, const std::vector<int>& idx) {
    Config q(env.dim());
    for (int i = 0; i < env.dim(); ++i) {
        const auto& b = env.bounds()[i];
        q[i] = idx[i] == k - 1 ? b.hi : b.lo + idx[i] * (b.hi - b.lo) / (k - 1);
    }
    return q;
}

Environment random_disks_2d(Rng& rng, int n, double size) {
    std::vector<Obstacle> obs;
    for (int i = 0; i < n; ++i) {
        obs.emplace_back(Circle{{size * uniform01(rng), size * uniform01(rng)}, size * (0.04 + 0.1 * uniform01(rng))});
    }
    return Environment::gridworld(size, obs);
}

Environment random_arm_3d(Rng& rng, int n) {
    std::vector<Obstacle> obs;
    for (int i = 0; i < n; ++i) {
        const double r = 1.2 + 1.6 * uniform01(rng), a = 2 * M_PI * uniform01(rng);
        obs.emplace_back(Circle{{r * std::cos(a), r * std::sin(a)}, 0.2 + 0.3 * uniform01(rng)});
    }
    return Environment::planar_arm({1, 1, 1}, obs);
}

}  // namespace

TEST(Search, EmptyGridHasAllNodes) {
    const auto env = Environment::gridworld(100);
    const GridGraph g(env, 10);
    EXPECT_EQ(g.node_count(), 100);
    EXPECT_EQ(g.free_count(), 100);
}

TEST(Search, ArmGridHasAtMostFiftyCubedNodes) {
    const auto env = load_environment(oraclenet::test::data_file("arm3.json"));
    const GridGraph g(env, 50);
    EXPECT_EQ(g.node_count(), 125000);
    EXPECT_LE(g.free_count(), 125000);
    EXPECT_GT(g.free_count(), 0);
}

TEST(Search, FreeCountMatchesBruteForceSweep) {
    const auto env = Environment::gridworld(100, {Circle{{40, 55}, 17}});
    const int k = 20;
    const GridGraph g(env, k);
    int count = 0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) count += env.is_free(lattice_config(env, k, {i, j})) ? 1 : 0;
    EXPECT_EQ(g.free_count(), count);
    EXPECT_LT(count, 400);
    for (NodeId id : g.free_nodes()) {
        EXPECT_TRUE(env.is_free(g.config(id)));
        EXPECT_TRUE(g.config(id).isApprox(lattice_config(env, k, g.index(id))));
        EXPECT_EQ(g.id(g.index(id)), id);
    }
}

TEST(Search, RejectsBadConstruction) {
    const auto env = Environment::gridworld(100);
    EXPECT_THROW(GridGraph(env, 1), UsageError);
    EXPECT_THROW(GridGraph(env, 1000, 100000), UsageError);
    const auto blocked = Environment::gridworld(10, {Circle{{5, 5}, 20}});
    EXPECT_THROW(GridGraph(blocked, 5), DomainError);
}

TEST(Search, InteriorAndCornerNeighbourCounts) {
    const auto env = Environment::gridworld(100);
    const GridGraph g(env, 10);
    EXPECT_EQ(g.neighbors(g.id({4, 4})).size(), 8u);
    EXPECT_EQ(g.neighbors(g.id({0, 0})).size(), 3u);
    EXPECT_EQ(g.neighbors(g.id({9, 0})).size(), 3u);
    EXPECT_EQ(g.neighbors(g.id({0, 5})).size(), 5u);
}

TEST(Search, NeighboursMatchExactGeometryNextToWall) {
    // Lattice on integers; the wall edges fall between lattice rows.
    const Obstacle wall = ConvexPolygon{{{4.6, 2.5}, {5.4, 2.5}, {5.4, 10.5}, {4.6, 10.5}}};
    const auto env = Environment::gridworld(10, {wall});
    const GridGraph g(env, 11);
    for (NodeId u : g.free_nodes()) {
        const auto iu = g.index(u);
        std::vector<NodeId> expected;
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                if (dx == 0 && dy == 0) continue;
                const int x = iu[0] + dx, y = iu[1] + dy;
                if (x < 0 || y < 0 || x > 10 || y > 10) continue;
                const Point2 a(iu[0], iu[1]), b(x, y);
                if (point_hits(b, wall) || segment_hits({a, b}, wall)) continue;
                expected.push_back(g.id({x, y}));
            }
        }
        std::sort(expected.begin(), expected.end());
        EXPECT_EQ(g.neighbors(u), expected) << "node " << iu[0] << "," << iu[1];
    }
}

TEST(Search, StartEqualsGoal) {
    const auto env = Environment::gridworld(100);
    const GridGraph g(env, 10);
    const auto p = astar(g, 7, 7);
    ASSERT_TRUE(p);
    EXPECT_EQ(p->nodes, std::vector<NodeId>{7});
    EXPECT_EQ(p->cost, 0.0);
}

TEST(Search, OppositeCornersArePureDiagonal) {
    const auto env = Environment::gridworld(100);
    const GridGraph g(env, 100);
    const auto p = astar(g, g.id({0, 0}), g.id({99, 99}));
    ASSERT_TRUE(p);
    EXPECT_EQ(p->nodes.size(), 100u);
    const double spacing = 100.0 / 99.0;
    EXPECT_NEAR(p->cost, 99 * std::sqrt(2.0) * spacing, 1e-9);
}

TEST(Search, WallWithGapMatchesDijkstra) {
    const auto env = Environment::gridworld(4, {ConvexPolygon{{{1.8, 1.5}, {2.2, 1.5}, {2.2, 4.5}, {1.8, 4.5}}}});
    const GridGraph g(env, 5);
    const auto s = g.id({0, 4}), t = g.id({4, 4});
    const auto p = astar(g, s, t);
    ASSERT_TRUE(p);
    const auto ref = dijkstra_cost(g, s, t);
    ASSERT_TRUE(ref);
    EXPECT_EQ(p->cost, *ref);
    EXPECT_GT(p->cost, 4.0);
}

TEST(Search, UnreachableGoalIsNoPath) {
    const auto env = Environment::gridworld(10, {ConvexPolygon{{{4.5, -1}, {5.5, -1}, {5.5, 11}, {4.5, 11}}}});
    const GridGraph g(env, 11);
    EXPECT_FALSE(astar(g, g.id({0, 0}), g.id({10, 10})));
    EXPECT_FALSE(dijkstra_cost(g, g.id({0, 0}), g.id({10, 10})));
}

TEST(Search, NonFreeEndpointIsUsageError) {
    const auto env = Environment::gridworld(10, {Circle{{5, 5}, 1}});
    const GridGraph g(env, 11);
    EXPECT_THROW((void)astar(g, g.id({5, 5}), g.id({0, 0})), UsageError);
}

TEST(Search, AstarEqualsDijkstraOnRandomInstances) {
    Rng rng(1234);
    int compared = 0;
    for (int inst = 0; inst < 60; ++inst) {
        const bool three_d = inst % 3 == 2;
        const auto env = three_d ? random_arm_3d(rng, 1 + static_cast<int>(uniform_index(rng, 4)))
                                 : random_disks_2d(rng, 1 + static_cast<int>(uniform_index(rng, 6)), 15.0);
        const int k = three_d ? 7 : 5 + static_cast<int>(uniform_index(rng, 11));
        const GridGraph g(env, k);
        if (g.free_count() < 2) continue;
        for (int q = 0; q < 3; ++q) {
            const auto s = g.free_nodes()[uniform_index(rng, g.free_count())];
            const auto t = g.free_nodes()[uniform_index(rng, g.free_count())];
            const auto p = astar(g, s, t);
            const auto ref = dijkstra_cost(g, s, t);
            ASSERT_EQ(p.has_value(), ref.has_value());
            if (!p) continue;
            EXPECT_EQ(p->cost, *ref);
            EXPECT_EQ(p->nodes.front(), s);
            EXPECT_EQ(p->nodes.back(), t);
            for (std::size_t i = 1; i < p->nodes.size(); ++i) {
                const auto nb = g.neighbors(p->nodes[i - 1]);
                EXPECT_TRUE(std::binary_search(nb.begin(), nb.end(), p->nodes[i]));
            }
            ++compared;
        }
    }
    EXPECT_GT(compared, 100);
}

TEST(Search, CostMonotoneUnderObstacleInsertion) {
    Rng rng(99);
    for (int inst = 0; inst < 30; ++inst) {
        std::vector<Obstacle> obs{Circle{{30 + 40 * uniform01(rng), 30 + 40 * uniform01(rng)}, 8}};
        const auto env1 = Environment::gridworld(100, obs);
        obs.emplace_back(Circle{{20 + 60 * uniform01(rng), 20 + 60 * uniform01(rng)}, 6});
        const auto env2 = Environment::gridworld(100, obs);
        const GridGraph g1(env1, 30), g2(env2, 30);
        const auto s = g2.free_nodes()[uniform_index(rng, g2.free_count())];
        const auto t = g2.free_nodes()[uniform_index(rng, g2.free_count())];
        const auto p1 = astar(g1, s, t);
        const auto p2 = astar(g2, s, t);
        ASSERT_TRUE(p1);
        if (p2) {
            EXPECT_GE(p2->cost, p1->cost);
        }
    }
}

TEST(Search, NearestNodeOnNode) {
    const auto env = Environment::gridworld(100);
    const GridGraph g(env, 11);
    EXPECT_EQ(g.nearest_node(cfg({30, 70})), g.id({3, 7}));
}

TEST(Search, NearestNodeTieGoesToSmallestIndex) {
    const auto env = Environment::gridworld(100);
    const GridGraph g(env, 11);
    EXPECT_EQ(g.nearest_node(cfg({35, 75})), g.id({3, 7}));
}

TEST(Search, NearestNodeMatchesExhaustiveScan) {
    const auto env = Environment::gridworld(100, {Circle{{50, 50}, 13}, Circle{{20, 80}, 6}});
    const GridGraph g(env, 21);
    Rng rng(17);
    for (int trial = 0; trial < 500; ++trial) {
        Config q = env.sample_uniform(rng);
        if (trial % 2 == 0) {
            // Bias toward the disk rim where the nearest lattice point is blocked.
            const double a = 2 * M_PI * uniform01(rng);
            q = cfg({50 + 13.5 * std::cos(a), 50 + 13.5 * std::sin(a)});
        }
        NodeId best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (NodeId id : g.free_nodes()) {
            const double d = (g.config(id) - q).norm();
            if (d < best_d) {
                best_d = d;
                best = id;
            }
        }
        EXPECT_EQ(g.nearest_node(q), best);
    }
}
