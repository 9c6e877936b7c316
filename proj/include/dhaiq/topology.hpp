#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "dhaiq/rng.hpp"

namespace dhaiq {

using Point = Eigen::Vector2d;
using NodeId = int;

struct NodeRecord
{
    NodeId id = 0;
    Point position = Point::Zero();
    bool is_adversary = false;
};

/// Undirected unit-disk graph: j is a neighbor of i iff |p_i - p_j| <= r, i != j.
struct Graph
{
    std::vector<std::vector<NodeId>> adjacency;

    std::size_t size() const { return adjacency.size(); }
    const std::vector<NodeId>& neighbors(NodeId i) const { return adjacency[static_cast<std::size_t>(i)]; }
};

/// Axis-aligned rectangle [x0, x0 + width) x [y0, y0 + height).
struct Rect
{
    double x0 = 0.0;
    double y0 = 0.0;
    double width = 0.0;
    double height = 0.0;

    double x1() const { return x0 + width; }
    double y1() const { return y0 + height; }
    double area() const { return width * height; }
    bool empty() const { return !(width > 0.0 && height > 0.0); }
    Point corner(int i) const;

    friend bool operator==(const Rect&, const Rect&) = default;
};

/// Rectangle a generation is confined to.
///
/// `bounds` is the nominal quadtree cell, which may stick out of the deployment
/// square when the grid is shifted; `rect` is that cell clipped to the square.
/// The estimated node count uses the nominal cell.
struct MonitoringArea
{
    Rect bounds;
    Rect rect;
    int level = 2;
    double estimated_count = 0.0;
    double deployment_side = 0.0;

    /// Level-2 area: the deployment square translated by `shift`, clipped.
    static MonitoringArea root(double side, const Point& shift, double density);
};

std::vector<NodeRecord> place_nodes(int n, double side, Rng& rng);

enum class AdversaryDistribution { Uniform, Gaussian };

struct AdversaryPlacement
{
    AdversaryDistribution distribution = AdversaryDistribution::Uniform;
    /// Gaussian only. Callers usually take the square center and side / 8.
    Point mean = Point::Zero();
    double sigma = 0.0;

    static AdversaryPlacement uniform() { return {}; }
    static AdversaryPlacement gaussian_centered(double side)
    {
        return {AdversaryDistribution::Gaussian, Point(side / 2, side / 2), side / 8};
    }
};

/// Marks exactly z0 nodes as adversaries. Throws std::invalid_argument when z0 > n.
void place_adversaries(std::vector<NodeRecord>& nodes, int z0, const AdversaryPlacement& placement, Rng& rng);

Graph build_graph(const std::vector<NodeRecord>& nodes, double range);

bool is_connected(const Graph& graph);

/// Ids inside the half-open area; edges on the deployment square's right and
/// top sides count as inside.
std::vector<NodeId> nodes_in(const MonitoringArea& area, const std::vector<NodeRecord>& nodes);

/// In-area node nearest each corner of the area (ties to the smaller id),
/// duplicates removed, ascending.
std::vector<NodeId> corner_watchdogs(const MonitoringArea& area, const std::vector<NodeRecord>& nodes);

/// Four equal quadrants of the nominal cell, each one level deeper.
/// Order: lower-left, lower-right, upper-left, upper-right.
std::array<MonitoringArea, 4> subdivide(const MonitoringArea& area);

/// Lines of "id x y is_adversary".
void write_nodes(std::ostream& os, const std::vector<NodeRecord>& nodes);

/// Lines of "id: n1 n2 ...".
void write_adjacency(std::ostream& os, const Graph& graph);

} // namespace dhaiq
