#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "dhaiq/topology.hpp"

using namespace dhaiq;

namespace {

std::vector<NodeRecord> fixed_nodes(std::initializer_list<Point> points)
{
    std::vector<NodeRecord> nodes;
    for (const Point& p : points)
        nodes.push_back({static_cast<NodeId>(nodes.size()), p, false});
    return nodes;
}

MonitoringArea square(double side, double density = 0.0)
{
    return MonitoringArea::root(side, Point::Zero(), density);
}

int adversary_count(const std::vector<NodeRecord>& nodes)
{
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const NodeRecord& n) { return n.is_adversary; }));
}

} // namespace

TEST(PlaceNodes, InsideSquareWithSequentialIds)
{
    Rng rng(1);
    const auto one = place_nodes(1, 800, rng);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_GE(one[0].position.minCoeff(), 0.0);
    EXPECT_LE(one[0].position.maxCoeff(), 800.0);

    const auto nodes = place_nodes(400, 800, rng);
    ASSERT_EQ(nodes.size(), 400u);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        EXPECT_EQ(nodes[i].id, static_cast<NodeId>(i));
        EXPECT_FALSE(nodes[i].is_adversary);
        EXPECT_GE(nodes[i].position.minCoeff(), 0.0);
        EXPECT_LE(nodes[i].position.maxCoeff(), 800.0);
    }
    EXPECT_THROW(place_nodes(0, 800, rng), std::invalid_argument);
}

TEST(PlaceNodes, MeanPositionIsCenter)
{
    Rng rng(2);
    const double side = 800;
    const auto nodes = place_nodes(100000, side, rng);
    Point sum = Point::Zero();
    for (const auto& n : nodes)
        sum += n.position;
    const Point mean = sum / static_cast<double>(nodes.size());
    // Uniform on [0, W] has sd W / sqrt(12); allow 5 standard errors.
    const double tol = 5 * side / std::sqrt(12.0) / std::sqrt(100000.0);
    EXPECT_NEAR(mean.x(), side / 2, tol);
    EXPECT_NEAR(mean.y(), side / 2, tol);
}

TEST(PlaceNodes, Deterministic)
{
    Rng a(9), b(9);
    const auto x = place_nodes(50, 100, a);
    const auto y = place_nodes(50, 100, b);
    for (std::size_t i = 0; i < x.size(); ++i)
        ASSERT_EQ(x[i].position, y[i].position);
}

TEST(PlaceAdversaries, MarksExactlyZ0)
{
    Rng rng(3);
    for (int n : {1, 10, 400}) {
        for (int z0 : {0, 1, n / 2, n}) {
            for (auto placement : {AdversaryPlacement::uniform(), AdversaryPlacement::gaussian_centered(800)}) {
                auto nodes = place_nodes(n, 800, rng);
                place_adversaries(nodes, z0, placement, rng);
                ASSERT_EQ(adversary_count(nodes), z0) << "n=" << n << " z0=" << z0;
            }
        }
    }
    auto nodes = place_nodes(5, 800, rng);
    EXPECT_THROW(place_adversaries(nodes, 6, AdversaryPlacement::uniform(), rng), std::invalid_argument);
}

TEST(PlaceAdversaries, UniformSubsetCoversAllIds)
{
    // Each id is picked with probability z0/n; over many draws every id shows up.
    Rng rng(4);
    const int n = 20;
    std::vector<int> hits(n, 0);
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        auto nodes = fixed_nodes({});
        for (int i = 0; i < n; ++i)
            nodes.push_back({i, Point(i, 0), false});
        place_adversaries(nodes, 5, AdversaryPlacement::uniform(), rng);
        for (const auto& node : nodes)
            hits[static_cast<std::size_t>(node.id)] += node.is_adversary;
    }
    const double p = 5.0 / n;
    const double tol = 5 * std::sqrt(p * (1 - p) / trials);
    for (int h : hits)
        EXPECT_NEAR(static_cast<double>(h) / trials, p, tol);
}

TEST(PlaceAdversaries, NarrowGaussianPicksNearestToMean)
{
    Rng rng(5);
    const Point mean(300, 500);
    for (int trial = 0; trial < 20; ++trial) {
        auto nodes = place_nodes(200, 800, rng);
        const int z0 = 1 + static_cast<int>(rng.below(30));
        // Oracle: sort all nodes by distance to the mean.
        std::vector<NodeId> order(nodes.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = static_cast<NodeId>(i);
        std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
            return (nodes[static_cast<std::size_t>(a)].position - mean).norm() <
                   (nodes[static_cast<std::size_t>(b)].position - mean).norm();
        });
        std::set<NodeId> expected(order.begin(), order.begin() + z0);

        place_adversaries(nodes, z0, {AdversaryDistribution::Gaussian, mean, 1e-9}, rng);
        std::set<NodeId> got;
        for (const auto& node : nodes)
            if (node.is_adversary)
                got.insert(node.id);
        ASSERT_EQ(got, expected);
    }
}

TEST(BuildGraph, DistanceIsInclusive)
{
    const auto nodes = fixed_nodes({Point(0, 0), Point(3, 4)});
    EXPECT_EQ(build_graph(nodes, 5.0).neighbors(0), std::vector<NodeId>{1});
    EXPECT_TRUE(build_graph(nodes, 5.0 - 1e-9).neighbors(0).empty());
    const auto far = fixed_nodes({Point(0, 0), Point(5.0 + 1e-9, 0)});
    EXPECT_TRUE(build_graph(far, 5.0).neighbors(0).empty());
}

TEST(BuildGraph, FullRangeGivesCompleteGraph)
{
    Rng rng(6);
    const auto nodes = place_nodes(60, 100, rng);
    const Graph g = build_graph(nodes, 100 * std::sqrt(2.0));
    for (std::size_t i = 0; i < g.size(); ++i)
        EXPECT_EQ(g.adjacency[i].size(), nodes.size() - 1);
    EXPECT_TRUE(is_connected(g));
}

TEST(BuildGraph, SymmetricAndMatchesDistanceExhaustively)
{
    Rng rng(7);
    const auto nodes = place_nodes(1000, 800, rng);
    const double r = 50;
    const Graph g = build_graph(nodes, r);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::set<NodeId> adj(g.adjacency[i].begin(), g.adjacency[i].end());
        ASSERT_EQ(adj.size(), g.adjacency[i].size());
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const bool want = i != j && (nodes[i].position - nodes[j].position).norm() <= r;
            ASSERT_EQ(adj.count(static_cast<NodeId>(j)) == 1, want) << i << "-" << j;
        }
    }
}

TEST(BuildGraph, Connectivity)
{
    const auto line = fixed_nodes({Point(0, 0), Point(1, 0), Point(2, 0)});
    EXPECT_TRUE(is_connected(build_graph(line, 1.0)));
    const auto split = fixed_nodes({Point(0, 0), Point(1, 0), Point(5, 0)});
    EXPECT_FALSE(is_connected(build_graph(split, 1.0)));
}

TEST(NodesIn, WholeSquareAndEmptyQuadrant)
{
    Rng rng(8);
    const auto nodes = place_nodes(100, 800, rng);
    EXPECT_EQ(nodes_in(square(800), nodes).size(), 100u);

    // Everything in the lower-left quadrant leaves the other three empty.
    const auto clustered = fixed_nodes({Point(10, 10), Point(20, 30), Point(100, 100)});
    const auto quads = subdivide(square(800));
    EXPECT_EQ(nodes_in(quads[0], clustered).size(), 3u);
    for (int q = 1; q < 4; ++q)
        EXPECT_TRUE(nodes_in(quads[static_cast<std::size_t>(q)], clustered).empty());
}

TEST(NodesIn, SharedEdgesBelongToOneQuadrant)
{
    const double side = 8;
    const auto nodes = fixed_nodes({Point(4, 4), Point(0, 4), Point(4, 0), Point(8, 8), Point(8, 0), Point(0, 8),
                                    Point(8, 4), Point(4, 8), Point(0, 0)});
    const auto quads = subdivide(square(side));
    std::vector<int> owners(nodes.size(), 0);
    for (const auto& q : quads)
        for (NodeId id : nodes_in(q, nodes))
            ++owners[static_cast<std::size_t>(id)];
    for (std::size_t i = 0; i < owners.size(); ++i)
        EXPECT_EQ(owners[i], 1) << "node " << i;
    // Center point goes to the upper-right quadrant.
    EXPECT_EQ(nodes_in(quads[3], nodes).front(), 0);
}

TEST(NodesIn, QuadtreePartitionIsDisjointAtEveryLevel)
{
    Rng rng(10);
    const auto nodes = place_nodes(500, 800, rng);
    for (const Point& shift : {Point(0, 0), Point(25, 25)}) {
        std::vector<MonitoringArea> level{MonitoringArea::root(800, shift, 500.0 / (800 * 800))};
        for (int depth = 0; depth < 4; ++depth) {
            std::vector<int> owners(nodes.size(), 0);
            for (const auto& a : level)
                for (NodeId id : nodes_in(a, nodes))
                    ++owners[static_cast<std::size_t>(id)];
            for (int c : owners)
                ASSERT_LE(c, 1);
            if (shift.isZero()) {
                for (int c : owners)
                    ASSERT_EQ(c, 1);
            }
            std::vector<MonitoringArea> next;
            for (const auto& a : level)
                for (const auto& child : subdivide(a))
                    next.push_back(child);
            level = std::move(next);
        }
    }
}

TEST(CornerWatchdogs, SingleNodeServesAllCorners)
{
    const auto nodes = fixed_nodes({Point(30, 70)});
    EXPECT_EQ(corner_watchdogs(square(100), nodes), std::vector<NodeId>{0});
    EXPECT_TRUE(corner_watchdogs(square(100), fixed_nodes({})).empty());
}

TEST(CornerWatchdogs, OneNearEachCorner)
{
    const auto nodes = fixed_nodes({Point(50, 50), Point(95, 96), Point(3, 2), Point(4, 90), Point(97, 5),
                                    Point(20, 20), Point(80, 80)});
    const MonitoringArea area = square(100);
    const auto got = corner_watchdogs(area, nodes);
    // Exhaustive nearest search per corner.
    std::set<NodeId> want;
    for (int c = 0; c < 4; ++c) {
        NodeId best = 0;
        for (const auto& n : nodes)
            if ((n.position - area.rect.corner(c)).norm() < (nodes[static_cast<std::size_t>(best)].position - area.rect.corner(c)).norm())
                best = n.id;
        want.insert(best);
    }
    EXPECT_EQ(got, std::vector<NodeId>(want.begin(), want.end()));
    EXPECT_EQ(got, (std::vector<NodeId>{1, 2, 3, 4}));
}

TEST(CornerWatchdogs, TiesGoToSmallerId)
{
    const auto nodes = fixed_nodes({Point(50, 10), Point(10, 50)});
    // Both are equidistant from (0, 0) and from (100, 100).
    const auto got = corner_watchdogs(square(100), nodes);
    EXPECT_EQ(got, (std::vector<NodeId>{0, 1}));
    const auto lone = corner_watchdogs(square(100), fixed_nodes({Point(50, 50), Point(50, 50)}));
    EXPECT_EQ(lone, std::vector<NodeId>{0});
}

TEST(CornerWatchdogs, OnlyInAreaNodesAreElected)
{
    const auto nodes = fixed_nodes({Point(1, 1), Point(60, 60), Point(99, 99)});
    const auto quads = subdivide(square(100));
    EXPECT_EQ(corner_watchdogs(quads[3], nodes), (std::vector<NodeId>{1, 2}));
}

TEST(Subdivide, QuartersAndCounts)
{
    MonitoringArea unit = square(1);
    unit.estimated_count = 50;
    const auto q = subdivide(unit);
    const Rect want[4] = {{0, 0, 0.5, 0.5}, {0.5, 0, 0.5, 0.5}, {0, 0.5, 0.5, 0.5}, {0.5, 0.5, 0.5, 0.5}};
    for (int i = 0; i < 4; ++i) {
        EXPECT_EQ(q[static_cast<std::size_t>(i)].rect, want[i]);
        EXPECT_EQ(q[static_cast<std::size_t>(i)].level, 3);
        EXPECT_DOUBLE_EQ(q[static_cast<std::size_t>(i)].estimated_count, 12.5);
    }
}

TEST(Subdivide, ShiftedCellsAreClipped)
{
    const MonitoringArea root = MonitoringArea::root(800, Point(25, 25), 400.0 / (800 * 800));
    EXPECT_EQ(root.rect, (Rect{25, 25, 775, 775}));
    EXPECT_DOUBLE_EQ(root.estimated_count, 400.0);
    const auto q = subdivide(root);
    EXPECT_EQ(q[3].bounds, (Rect{425, 425, 400, 400}));
    EXPECT_EQ(q[3].rect, (Rect{425, 425, 375, 375}));
    EXPECT_DOUBLE_EQ(q[3].estimated_count, 100.0);
}

TEST(Export, NodeAndAdjacencyDumps)
{
    auto nodes = fixed_nodes({Point(0, 0), Point(1.5, 0), Point(10, 10)});
    nodes[2].is_adversary = true;
    std::ostringstream n, a;
    write_nodes(n, nodes);
    write_adjacency(a, build_graph(nodes, 2));
    EXPECT_EQ(n.str(), "0 0 0 0\n1 1.5 0 0\n2 10 10 1\n");
    EXPECT_EQ(a.str(), "0: 1\n1: 0\n2:\n");
}
