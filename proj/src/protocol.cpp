#include "dhaiq/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <ostream>
#include <stdexcept>

namespace dhaiq {

std::vector<NodeId> Network::adversaries() const
{
    std::vector<NodeId> ids;
    for (const NodeRecord& node : nodes)
        if (node.is_adversary)
            ids.push_back(node.id);
    return ids;
}

std::vector<NodeId> SuspectTable::at_least(int threshold) const
{
    std::vector<NodeId> ids;
    for (std::size_t i = 0; i < levels_.size(); ++i)
        if (levels_[i] >= threshold)
            ids.push_back(static_cast<NodeId>(i));
    return ids;
}

GenerationState::GenerationState(GenerationId id_, MonitoringArea area_, const Network& network, int expiry)
    : id(id_), area(std::move(area_)), expiry_round(expiry)
{
    members = nodes_in(area, network.nodes);
    watchdogs = corner_watchdogs(area, network.nodes);
    local_index.assign(network.size(), -1);
    for (std::size_t i = 0; i < members.size(); ++i)
        local_index[static_cast<std::size_t>(members[i])] = static_cast<int>(i);
    buffers.resize(members.size());
}

int timestamp_rounds(double estimated_count)
{
    if (estimated_count < 0.0)
        throw std::invalid_argument("timestamp_rounds: negative node estimate");
    const double hops = std::ceil(std::sqrt(2.0 * estimated_count));
    return std::max(1, static_cast<int>(hops));
}

ProbePacket corrupt(const ProbePacket& packet, const AdversaryModel& model, const GaloisField& field, Rng& rng)
{
    std::size_t begin = 0;
    std::size_t end = packet.row().size();
    switch (model.mode) {
    case CorruptionMode::Payload:
        begin = packet.k();
        break;
    case CorruptionMode::Coefficients:
        end = packet.k();
        break;
    case CorruptionMode::Both:
        break;
    }
    if (begin >= end)
        throw std::invalid_argument("corrupt: targeted block is empty");

    ProbePacket out = packet;
    const std::size_t index = begin + rng.below(end - begin);
    Symbol& target = out.row()[index];
    Symbol fresh = field.random_symbol(rng);
    while (fresh == target)
        fresh = field.random_symbol(rng);
    target = fresh;
    return out;
}

namespace {

struct Emission
{
    NodeId sender;
    ProbePacket packet;
};

bool corrupts(const Network& network, const GenerationState& gen, const AdversaryModel& model, NodeId id)
{
    if (!network.is_adversary(id))
        return false;
    if (model.act_normal_as_watchdog && std::binary_search(gen.watchdogs.begin(), gen.watchdogs.end(), id))
        return false;
    return true;
}

} // namespace

GenerationOutcome run_generation(GenerationState& gen, const Network& network, const GaloisField& field,
                                 const ProtocolConfig& config, Rng& rng, std::ostream* trace)
{
    GenerationOutcome outcome;
    outcome.watchdogs = gen.watchdogs;
    if (gen.watchdogs.empty()) {
        outcome.skipped = true;
        return outcome;
    }
    if (gen.watchdogs.size() > config.probes)
        throw std::invalid_argument("run_generation: more watchdogs than probes");

    std::vector<char> held(gen.members.size(), 0);
    auto deliver = [&](const std::vector<Emission>& emissions) {
        for (const Emission& e : emissions)
            for (NodeId receiver : network.graph.neighbors(e.sender)) {
                if (!gen.contains(receiver))
                    continue; // outside the monitoring range: dropped
                PacketPool& pool = gen.buffer(receiver);
                const bool kept = insert_if_innovative(field, pool, e.packet);
                if (kept)
                    held[static_cast<std::size_t>(gen.local_index[static_cast<std::size_t>(receiver)])] = 1;
                if (trace)
                    *trace << gen.round << ' ' << e.sender << ' ' << receiver << ' ' << (kept ? 1 : 0) << ' '
                           << pool.rank() << '\n';
            }
    };

    // Round 0: every watchdog injects a probe with a unit encoding vector.
    std::vector<Emission> emissions;
    gen.round = 0;
    for (std::size_t j = 0; j < gen.watchdogs.size(); ++j) {
        const NodeId w = gen.watchdogs[j];
        Row coefficients(config.probes);
        coefficients[j] = Symbol(1);
        Row payload(config.payload_length);
        for (Symbol& s : payload)
            s = field.random_symbol(rng);
        ProbePacket probe(gen.id, coefficients, payload, gen.expiry_round);
        insert_if_innovative(field, gen.buffer(w), probe);
        held[static_cast<std::size_t>(gen.local_index[static_cast<std::size_t>(w)])] = 1;
        if (corrupts(network, gen, config.adversary, w))
            probe = corrupt(probe, config.adversary, field, rng);
        emissions.push_back({w, std::move(probe)});
    }
    outcome.transmissions += emissions.size();
    deliver(emissions);

    // Later rounds: buffers as of the previous round are encoded, then all
    // broadcasts are delivered at once.
    for (gen.round = 1; gen.round < gen.expiry_round; ++gen.round) {
        emissions.clear();
        for (std::size_t i = 0; i < gen.members.size(); ++i) {
            const PacketPool& pool = gen.buffers[i];
            if (pool.empty())
                continue;
            const NodeId sender = gen.members[i];
            ProbePacket out = local_encode(field, pool.packets(), rng);
            if (!out.alive_at(gen.round))
                continue;
            if (corrupts(network, gen, config.adversary, sender))
                out = corrupt(out, config.adversary, field, rng);
            emissions.push_back({sender, std::move(out)});
        }
        outcome.transmissions += emissions.size();
        deliver(emissions);
    }
    outcome.rounds = gen.expiry_round;

    for (NodeId w : gen.watchdogs) {
        const PacketPool& pool = gen.buffer(w);
        outcome.watchdog_pools.push_back(pool);
        const bool reports = !(config.adversary.silent_as_watchdog && network.is_adversary(w));
        if (reports && detect(pool, config.probes))
            outcome.detected = true;
    }
    for (std::size_t i = 0; i < gen.members.size(); ++i)
        if (held[i])
            outcome.holders.push_back(gen.members[i]);

    // Time stamp expired: everyone empties their buffer.
    for (PacketPool& pool : gen.buffers)
        pool.clear();
    return outcome;
}

RunMetrics dhaiq_run(const Network& network, const GaloisField& field, const ProtocolConfig& config,
                     std::uint32_t run_index, const Point& origin_shift, SuspectTable& suspects, Rng& rng,
                     std::ostream* trace)
{
    if (!(config.threshold >= 1.0))
        throw std::invalid_argument("dhaiq_run: threshold must be at least 1");
    if (suspects.size() != network.size())
        throw std::invalid_argument("dhaiq_run: suspect table does not match network");

    RunMetrics metrics;
    std::vector<char> marked(network.size(), 0);
    std::map<int, int> level_rounds; // level -> longest generation at that level

    std::deque<MonitoringArea> queue{MonitoringArea::root(network.side, origin_shift, network.density())};
    std::uint32_t area_counter = 0;
    while (!queue.empty()) {
        MonitoringArea area = std::move(queue.front());
        queue.pop_front();
        if (area.rect.empty())
            continue;
        const std::uint32_t area_id = area_counter++;

        if (area.estimated_count < config.threshold) {
            const std::vector<NodeId> members = nodes_in(area, network.nodes);
            if (members.empty())
                continue;
            for (NodeId id : members) {
                suspects.increment(id);
                marked[static_cast<std::size_t>(id)] = 1;
            }
            ++metrics.marked_areas;
            metrics.deepest_level = std::max(metrics.deepest_level, area.level);
            continue;
        }

        const int expiry = timestamp_rounds(area.estimated_count);
        GenerationState gen({run_index, static_cast<std::uint32_t>(area.level), area_id}, area, network, expiry);
        if (gen.members.empty())
            continue;
        metrics.deepest_level = std::max(metrics.deepest_level, area.level);
        const GenerationOutcome outcome = run_generation(gen, network, field, config, rng, trace);
        if (outcome.skipped) {
            ++metrics.skipped_generations;
            continue;
        }
        ++metrics.generations;
        metrics.probe_transmissions += outcome.transmissions;
        int& longest = level_rounds[area.level];
        longest = std::max(longest, outcome.rounds);
        if (outcome.detected) {
            ++metrics.detections;
            for (MonitoringArea& child : subdivide(area))
                queue.push_back(std::move(child));
        }
    }

    for (const auto& [level, rounds] : level_rounds)
        metrics.rounds_elapsed += rounds;
    metrics.levels_triggered = static_cast<int>(level_rounds.size());
    for (std::size_t i = 0; i < marked.size(); ++i)
        if (marked[i])
            metrics.marked.push_back(static_cast<NodeId>(i));

    const std::vector<NodeId> adversaries = network.adversaries();
    const DetectionRatios ratios = compute_metrics(metrics.marked, adversaries, network.size(), adversaries.size());
    metrics.innocent_ratio = ratios.innocent_ratio;
    metrics.catch_ratio = ratios.catch_ratio;
    return metrics;
}

double least_area_edge(double side, double node_count, double threshold)
{
    if (!(threshold >= 1.0))
        throw std::invalid_argument("least_area_edge: threshold must be at least 1");
    double edge = side;
    double count = node_count;
    while (!(count < threshold)) {
        edge /= 2;
        count /= 4;
    }
    return edge;
}

ShiftOutcome run_with_shift(const Network& network, const GaloisField& field, const ProtocolConfig& config, Rng& rng)
{
    if (config.shift_runs < 1)
        throw std::invalid_argument("run_with_shift: need at least one run");
    ShiftOutcome out{SuspectTable(network.size()), {}, {}, {}};
    const double edge = least_area_edge(network.side, static_cast<double>(network.size()), config.threshold);
    for (int i = 0; i < config.shift_runs; ++i) {
        const double offset = edge * i / config.shift_runs;
        out.runs.push_back(dhaiq_run(network, field, config, static_cast<std::uint32_t>(i), Point(offset, offset),
                                     out.suspects, rng));
    }
    out.final_suspects = out.suspects.at_least(config.final_threshold);
    const std::vector<NodeId> adversaries = network.adversaries();
    out.ratios = compute_metrics(out.final_suspects, adversaries, network.size(), adversaries.size());
    return out;
}

DetectionRatios compute_metrics(const std::vector<NodeId>& marked, const std::vector<NodeId>& adversaries,
                                std::size_t n, std::size_t z0)
{
    if (n == 0)
        throw std::invalid_argument("compute_metrics: empty network");
    std::vector<NodeId> m = marked;
    std::vector<NodeId> a = adversaries;
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
    std::sort(a.begin(), a.end());
    std::vector<NodeId> caught;
    std::set_intersection(m.begin(), m.end(), a.begin(), a.end(), std::back_inserter(caught));

    DetectionRatios r;
    r.innocent_ratio = static_cast<double>(m.size() - caught.size()) / static_cast<double>(n);
    r.catch_ratio = z0 == 0 ? 1.0 : static_cast<double>(caught.size()) / static_cast<double>(z0);
    return r;
}

} // namespace dhaiq
