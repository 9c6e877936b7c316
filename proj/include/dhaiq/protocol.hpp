#pragma once

#include <iosfwd>
#include <vector>

#include "dhaiq/coding.hpp"
#include "dhaiq/gf.hpp"
#include "dhaiq/rng.hpp"
#include "dhaiq/topology.hpp"

namespace dhaiq {

enum class CorruptionMode { Payload, Coefficients, Both };

struct AdversaryModel
{
    CorruptionMode mode = CorruptionMode::Both;
    /// Behave honestly while serving as a watchdog of the current generation.
    bool act_normal_as_watchdog = false;
    /// Withhold detection reports while serving as a watchdog.
    bool silent_as_watchdog = false;
};

struct ProtocolConfig
{
    std::size_t probes = 4;          // k, generation size
    std::size_t payload_length = 16; // p
    double threshold = 5.0;          // mu, least-area node count
    AdversaryModel adversary;
    int shift_runs = 2;
    int final_threshold = 2;
};

/// Deployed nodes, their connectivity and the side of the deployment square.
struct Network
{
    std::vector<NodeRecord> nodes;
    Graph graph;
    double side = 0.0;

    std::size_t size() const { return nodes.size(); }
    double density() const { return static_cast<double>(nodes.size()) / (side * side); }
    std::vector<NodeId> adversaries() const;
    bool is_adversary(NodeId id) const { return nodes[static_cast<std::size_t>(id)].is_adversary; }
};

/// Per-node suspect counters, accumulated across runs.
class SuspectTable
{
public:
    explicit SuspectTable(std::size_t n = 0) : levels_(n, 0) {}

    void increment(NodeId id) { ++levels_[static_cast<std::size_t>(id)]; }
    int level(NodeId id) const { return levels_[static_cast<std::size_t>(id)]; }
    std::size_t size() const { return levels_.size(); }
    std::vector<NodeId> at_least(int threshold) const;

private:
    std::vector<int> levels_;
};

struct RunMetrics
{
    std::vector<NodeId> marked; // ascending
    double innocent_ratio = 0.0;
    double catch_ratio = 1.0;
    std::size_t probe_transmissions = 0;
    int rounds_elapsed = 0;
    int levels_triggered = 0;
    int deepest_level = 0;
    int generations = 0;
    int skipped_generations = 0;
    int detections = 0;
    int marked_areas = 0;
};

struct DetectionRatios
{
    double innocent_ratio = 0.0;
    double catch_ratio = 1.0;
};

/// Live state of one generation inside one monitoring area.
struct GenerationState
{
    GenerationId id;
    MonitoringArea area;
    std::vector<NodeId> watchdogs;
    int expiry_round = 1;
    int round = 0;
    std::vector<NodeId> members;     // in-area node ids, ascending
    std::vector<int> local_index;    // node id -> index into buffers, -1 outside
    std::vector<PacketPool> buffers; // one per member

    GenerationState(GenerationId id, MonitoringArea area, const Network& network, int expiry_round);

    bool contains(NodeId id) const { return local_index[static_cast<std::size_t>(id)] >= 0; }
    PacketPool& buffer(NodeId id) { return buffers[static_cast<std::size_t>(local_index[static_cast<std::size_t>(id)])]; }
};

struct GenerationOutcome
{
    std::vector<NodeId> watchdogs;
    std::vector<PacketPool> watchdog_pools; // parallel to watchdogs, captured before expiry
    bool detected = false;                  // some reporting watchdog saw rank > k
    std::size_t transmissions = 0;
    int rounds = 0;
    std::vector<NodeId> holders; // nodes that held a packet of this generation at any point
    bool skipped = false;        // no watchdog could be elected
};

/// Rounds a generation lives for: max(1, ceil(sqrt(2 k_est))).
int timestamp_rounds(double estimated_count);

/// Replaces one uniformly chosen symbol of the targeted block by a different random symbol.
ProbePacket corrupt(const ProbePacket& packet, const AdversaryModel& model, const GaloisField& field, Rng& rng);

/// Rank test of a watchdog pool for a generation of k probes.
inline bool detect(const PacketPool& pool, std::size_t probes = 4) { return pool.rank() > probes; }

/// Runs one generation to expiry: probes at round 0, then one coded broadcast per
/// buffered node per round, confined to the area. Buffers are empty afterwards.
/// If `trace` is set, every in-area delivery is logged as
/// "round sender receiver innovative rank".
GenerationOutcome run_generation(GenerationState& gen, const Network& network, const GaloisField& field,
                                 const ProtocolConfig& config, Rng& rng, std::ostream* trace = nullptr);

/// One pass of the hierarchical search, starting from the deployment square
/// translated by `origin_shift`. Marked nodes get their suspect level raised.
RunMetrics dhaiq_run(const Network& network, const GaloisField& field, const ProtocolConfig& config,
                     std::uint32_t run_index, const Point& origin_shift, SuspectTable& suspects, Rng& rng,
                     std::ostream* trace = nullptr);

/// Edge of the least monitoring area: side / 2^L for the smallest L with n / 4^L < mu.
double least_area_edge(double side, double node_count, double threshold);

struct ShiftOutcome
{
    SuspectTable suspects;
    std::vector<NodeId> final_suspects;
    std::vector<RunMetrics> runs;
    DetectionRatios ratios; // of the final suspect set
};

/// config.shift_runs passes with origins offset by i * s / runs along both
/// axes; final suspects are nodes marked at least config.final_threshold times.
ShiftOutcome run_with_shift(const Network& network, const GaloisField& field, const ProtocolConfig& config,
                            Rng& rng);

/// innocent = |marked \ adversaries| / n; catch = |marked & adversaries| / z0 (1 when z0 = 0).
DetectionRatios compute_metrics(const std::vector<NodeId>& marked, const std::vector<NodeId>& adversaries,
                                std::size_t n, std::size_t z0);

} // namespace dhaiq
