#include "dhaiq/topology.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace dhaiq {

namespace {

Rect clip(const Rect& r, double side)
{
    const double x0 = std::clamp(r.x0, 0.0, side);
    const double y0 = std::clamp(r.y0, 0.0, side);
    const double x1 = std::clamp(r.x1(), 0.0, side);
    const double y1 = std::clamp(r.y1(), 0.0, side);
    return {x0, y0, x1 - x0, y1 - y0};
}

bool in_interval(double v, double lo, double hi, double side)
{
    return v >= lo && (v < hi || (hi >= side && v <= side));
}

} // namespace

Point Rect::corner(int i) const
{
    return {(i & 1) ? x1() : x0, (i & 2) ? y1() : y0};
}

MonitoringArea MonitoringArea::root(double side, const Point& shift, double density)
{
    MonitoringArea area;
    area.bounds = {shift.x(), shift.y(), side, side};
    area.rect = clip(area.bounds, side);
    area.level = 2;
    area.estimated_count = density * area.bounds.area();
    area.deployment_side = side;
    return area;
}

std::vector<NodeRecord> place_nodes(int n, double side, Rng& rng)
{
    if (n < 1 || !(side > 0.0))
        throw std::invalid_argument("place_nodes: need n >= 1 and side > 0");
    std::vector<NodeRecord> nodes(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = rng.uniform(0.0, side);
        const double y = rng.uniform(0.0, side);
        nodes[static_cast<std::size_t>(i)] = {i, Point(x, y), false};
    }
    return nodes;
}

void place_adversaries(std::vector<NodeRecord>& nodes, int z0, const AdversaryPlacement& placement, Rng& rng)
{
    const auto n = static_cast<int>(nodes.size());
    if (z0 < 0 || z0 > n)
        throw std::invalid_argument("place_adversaries: adversary count must lie in [0, n]");
    for (NodeRecord& node : nodes)
        node.is_adversary = false;

    if (placement.distribution == AdversaryDistribution::Uniform) {
        std::vector<NodeId> ids(static_cast<std::size_t>(n));
        std::iota(ids.begin(), ids.end(), 0);
        for (int i = 0; i < z0; ++i) {
            const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
            std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
            nodes[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])].is_adversary = true;
        }
        return;
    }

    for (int placed = 0; placed < z0; ++placed) {
        const Point target(rng.normal(placement.mean.x(), placement.sigma),
                           rng.normal(placement.mean.y(), placement.sigma));
        NodeRecord* best = nullptr;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (NodeRecord& node : nodes) {
            if (node.is_adversary)
                continue;
            const double d2 = (node.position - target).squaredNorm();
            if (d2 < best_d2) {
                best_d2 = d2;
                best = &node;
            }
        }
        best->is_adversary = true;
    }
}

Graph build_graph(const std::vector<NodeRecord>& nodes, double range)
{
    if (!(range > 0.0))
        throw std::invalid_argument("build_graph: range must be positive");
    const double r2 = range * range;
    Graph g;
    g.adjacency.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if ((nodes[i].position - nodes[j].position).squaredNorm() <= r2) {
                g.adjacency[i].push_back(static_cast<NodeId>(j));
                g.adjacency[j].push_back(static_cast<NodeId>(i));
            }
    for (auto& list : g.adjacency)
        std::sort(list.begin(), list.end());
    return g;
}

bool is_connected(const Graph& graph)
{
    if (graph.size() == 0)
        return true;
    std::vector<char> seen(graph.size(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        for (NodeId w : graph.neighbors(v))
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    return count == graph.size();
}

std::vector<NodeId> nodes_in(const MonitoringArea& area, const std::vector<NodeRecord>& nodes)
{
    std::vector<NodeId> ids;
    if (area.rect.empty())
        return ids;
    const double side = area.deployment_side;
    for (const NodeRecord& node : nodes)
        if (in_interval(node.position.x(), area.rect.x0, area.rect.x1(), side) &&
            in_interval(node.position.y(), area.rect.y0, area.rect.y1(), side))
            ids.push_back(node.id);
    return ids;
}

std::vector<NodeId> corner_watchdogs(const MonitoringArea& area, const std::vector<NodeRecord>& nodes)
{
    const std::vector<NodeId> members = nodes_in(area, nodes);
    std::vector<NodeId> chosen;
    if (members.empty())
        return chosen;
    for (int c = 0; c < 4; ++c) {
        const Point corner = area.rect.corner(c);
        NodeId best = members.front();
        double best_d2 = std::numeric_limits<double>::infinity();
        // members are ascending, so strict < keeps the smaller id on ties
        for (NodeId id : members) {
            const double d2 = (nodes[static_cast<std::size_t>(id)].position - corner).squaredNorm();
            if (d2 < best_d2) {
                best_d2 = d2;
                best = id;
            }
        }
        chosen.push_back(best);
    }
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    return chosen;
}

std::array<MonitoringArea, 4> subdivide(const MonitoringArea& area)
{
    if (area.bounds.empty())
        throw std::invalid_argument("subdivide: area has no extent");
    const double w = area.bounds.width / 2;
    const double h = area.bounds.height / 2;
    std::array<MonitoringArea, 4> children;
    for (int q = 0; q < 4; ++q) {
        MonitoringArea& child = children[static_cast<std::size_t>(q)];
        child.bounds = {area.bounds.x0 + ((q & 1) ? w : 0.0), area.bounds.y0 + ((q & 2) ? h : 0.0), w, h};
        child.rect = clip(child.bounds, area.deployment_side);
        child.level = area.level + 1;
        child.estimated_count = area.estimated_count / 4;
        child.deployment_side = area.deployment_side;
    }
    return children;
}

void write_nodes(std::ostream& os, const std::vector<NodeRecord>& nodes)
{
    for (const NodeRecord& node : nodes)
        os << node.id << ' ' << node.position.x() << ' ' << node.position.y() << ' '
           << (node.is_adversary ? 1 : 0) << '\n';
}

void write_adjacency(std::ostream& os, const Graph& graph)
{
    for (std::size_t i = 0; i < graph.size(); ++i) {
        os << i << ':';
        for (NodeId j : graph.adjacency[i])
            os << ' ' << j;
        os << '\n';
    }
}

} // namespace dhaiq
