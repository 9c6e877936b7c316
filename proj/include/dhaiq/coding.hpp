#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dhaiq/gf.hpp"
#include "dhaiq/rng.hpp"

namespace dhaiq {

/// Augmented row: k coefficient symbols followed by p payload symbols.
using Row = std::vector<Symbol>;

/// Raised when packets from different generations are mixed.
class ProtocolError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct GenerationId
{
    std::uint32_t run = 0;
    std::uint32_t level = 0;
    std::uint32_t area = 0;

    friend auto operator<=>(const GenerationId&, const GenerationId&) = default;
};

/// A coded packet of one generation: global encoding vector followed by payload.
class ProbePacket
{
public:
    ProbePacket() = default;
    ProbePacket(GenerationId generation, std::span<const Symbol> encoding_vector,
                std::span<const Symbol> payload, int expiry_round);

    /// Builds a packet straight from an augmented row whose first k symbols
    /// are the encoding vector.
    static ProbePacket from_row(GenerationId generation, std::size_t k, Row row, int expiry_round);

    const GenerationId& generation() const { return generation_; }
    int expiry_round() const { return expiry_round_; }
    std::size_t k() const { return k_; }
    std::size_t payload_length() const { return row_.size() - k_; }

    std::span<const Symbol> encoding_vector() const { return std::span(row_).first(k_); }
    std::span<const Symbol> payload() const { return std::span(row_).subspan(k_); }
    const Row& row() const { return row_; }
    Row& row() { return row_; }

    bool is_zero() const;
    /// True while the generation's time stamp has not run out.
    bool alive_at(int round) const { return round < expiry_round_; }

private:
    GenerationId generation_;
    std::size_t k_ = 0;
    Row row_;
    int expiry_round_ = 0;
};

/// Dimension of the span of rows over the field. Rows must share one length.
std::size_t rank(const GaloisField& field, std::span<const Row> rows);

/// Set of mutually independent packets kept by one node.
///
/// Alongside the stored packets the pool maintains a reduced row echelon
/// basis of their span, so an innovation test costs one row reduction.
class PacketPool
{
public:
    PacketPool() = default;

    std::size_t size() const { return packets_.size(); }
    bool empty() const { return packets_.empty(); }
    /// Equal to size() by construction.
    std::size_t rank() const { return basis_.size(); }
    /// The pool spans the whole row space; nothing further can be innovative.
    bool saturated() const { return !basis_.empty() && basis_.size() == basis_.front().size(); }

    const std::vector<ProbePacket>& packets() const { return packets_; }
    std::vector<Row> rows() const;

    /// Residual of row after elimination against the basis (all zero iff spanned).
    Row reduce(const GaloisField& field, const Row& row) const;

    bool admits(const GaloisField& field, const ProbePacket& packet) const;
    bool insert(const GaloisField& field, const ProbePacket& packet);

    void clear();

private:
    void check_length(const ProbePacket& packet) const;

    std::vector<ProbePacket> packets_;
    std::vector<Row> basis_;
    std::vector<std::size_t> pivots_;
};

/// Random linear combination of the buffered packets, coefficients uniform over the field.
ProbePacket local_encode(const GaloisField& field, std::span<const ProbePacket> buffer, Rng& rng);

inline bool is_innovative(const GaloisField& field, const ProbePacket& packet, const PacketPool& pool)
{
    return pool.admits(field, packet);
}

inline bool insert_if_innovative(const GaloisField& field, PacketPool& pool, const ProbePacket& packet)
{
    return pool.insert(field, packet);
}

/// Trace-log encoding: run, level and area as 32-bit little-endian words, then
/// every symbol of the augmented row little-endian in ceil(u/8) bytes.
std::vector<std::uint8_t> serialize(const ProbePacket& packet, int field_degree);

std::string to_hex(std::span<const std::uint8_t> bytes);

} // namespace dhaiq
