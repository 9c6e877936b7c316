#include "dhaiq/coding.hpp"

#include <algorithm>
#include <cstdio>

namespace dhaiq {

namespace {

// row -= factor * other, starting at column `from`.
void axpy(const GaloisField& field, Row& row, Symbol factor, const Row& other, std::size_t from = 0)
{
    if (factor.is_zero())
        return;
    for (std::size_t c = from; c < row.size(); ++c)
        row[c] = GaloisField::sub(row[c], field.mul(factor, other[c]));
}

std::size_t first_nonzero(const Row& row)
{
    auto it = std::find_if(row.begin(), row.end(), [](Symbol s) { return !s.is_zero(); });
    return static_cast<std::size_t>(it - row.begin());
}

} // namespace

ProbePacket::ProbePacket(GenerationId generation, std::span<const Symbol> encoding_vector,
                         std::span<const Symbol> payload, int expiry_round)
    : generation_(generation), k_(encoding_vector.size()), expiry_round_(expiry_round)
{
    row_.reserve(encoding_vector.size() + payload.size());
    row_.insert(row_.end(), encoding_vector.begin(), encoding_vector.end());
    row_.insert(row_.end(), payload.begin(), payload.end());
}

ProbePacket ProbePacket::from_row(GenerationId generation, std::size_t k, Row row, int expiry_round)
{
    if (k > row.size())
        throw std::invalid_argument("encoding vector longer than row");
    ProbePacket packet;
    packet.generation_ = generation;
    packet.k_ = k;
    packet.row_ = std::move(row);
    packet.expiry_round_ = expiry_round;
    return packet;
}

bool ProbePacket::is_zero() const
{
    return std::all_of(row_.begin(), row_.end(), [](Symbol s) { return s.is_zero(); });
}

std::size_t rank(const GaloisField& field, std::span<const Row> rows)
{
    if (rows.empty())
        return 0;
    const std::size_t cols = rows.front().size();
    std::vector<Row> m(rows.begin(), rows.end());
    for (const Row& r : m)
        if (r.size() != cols)
            throw std::invalid_argument("rank: rows differ in length");

    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        auto pivot = std::find_if(m.begin() + static_cast<std::ptrdiff_t>(r), m.end(),
                                  [c](const Row& row) { return !row[c].is_zero(); });
        if (pivot == m.end())
            continue;
        std::swap(*pivot, m[r]);
        const Symbol scale = field.inv(m[r][c]);
        for (std::size_t j = c; j < cols; ++j)
            m[r][j] = field.mul(m[r][j], scale);
        for (std::size_t i = r + 1; i < m.size(); ++i)
            axpy(field, m[i], m[i][c], m[r], c);
        ++r;
    }
    return r;
}

std::vector<Row> PacketPool::rows() const
{
    std::vector<Row> out;
    out.reserve(packets_.size());
    for (const ProbePacket& p : packets_)
        out.push_back(p.row());
    return out;
}

void PacketPool::check_length(const ProbePacket& packet) const
{
    if (!packets_.empty() && (packet.row().size() != packets_.front().row().size() ||
                              packet.k() != packets_.front().k()))
        throw std::invalid_argument("packet shape does not match pool");
}

Row PacketPool::reduce(const GaloisField& field, const Row& row) const
{
    Row residual = row;
    for (std::size_t i = 0; i < basis_.size(); ++i)
        axpy(field, residual, residual[pivots_[i]], basis_[i]);
    return residual;
}

bool PacketPool::admits(const GaloisField& field, const ProbePacket& packet) const
{
    check_length(packet);
    if (saturated())
        return false;
    const Row residual = reduce(field, packet.row());
    return first_nonzero(residual) < residual.size();
}

bool PacketPool::insert(const GaloisField& field, const ProbePacket& packet)
{
    check_length(packet);
    if (saturated())
        return false;
    Row residual = reduce(field, packet.row());
    const std::size_t pivot = first_nonzero(residual);
    if (pivot == residual.size())
        return false;

    const Symbol scale = field.inv(residual[pivot]);
    for (Symbol& s : residual)
        s = field.mul(s, scale);
    // Keep the basis fully reduced: clear the new pivot column from older rows.
    for (Row& b : basis_)
        axpy(field, b, b[pivot], residual);

    basis_.push_back(std::move(residual));
    pivots_.push_back(pivot);
    packets_.push_back(packet);
    return true;
}

void PacketPool::clear()
{
    packets_.clear();
    basis_.clear();
    pivots_.clear();
}

ProbePacket local_encode(const GaloisField& field, std::span<const ProbePacket> buffer, Rng& rng)
{
    if (buffer.empty())
        throw std::invalid_argument("local_encode: empty buffer");
    const ProbePacket& head = buffer.front();
    Row out(head.row().size());
    for (const ProbePacket& packet : buffer) {
        if (packet.generation() != head.generation())
            throw ProtocolError("local_encode: packets from different generations");
        if (packet.row().size() != out.size() || packet.k() != head.k())
            throw ProtocolError("local_encode: packet shape mismatch within generation");
        const Symbol beta = field.random_symbol(rng);
        for (std::size_t c = 0; c < out.size(); ++c)
            out[c] = GaloisField::add(out[c], field.mul(beta, packet.row()[c]));
    }
    return ProbePacket::from_row(head.generation(), head.k(), std::move(out), head.expiry_round());
}

std::vector<std::uint8_t> serialize(const ProbePacket& packet, int field_degree)
{
    const int width = (field_degree + 7) / 8;
    std::vector<std::uint8_t> out;
    out.reserve(12 + packet.row().size() * static_cast<std::size_t>(width));
    auto put = [&out](std::uint32_t v, int bytes) {
        for (int b = 0; b < bytes; ++b)
            out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
    };
    put(packet.generation().run, 4);
    put(packet.generation().level, 4);
    put(packet.generation().area, 4);
    for (Symbol s : packet.row())
        put(s.value, width);
    return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes)
{
    std::string s;
    s.reserve(bytes.size() * 2);
    char buf[3];
    for (std::uint8_t b : bytes) {
        std::snprintf(buf, sizeof buf, "%02x", b);
        s += buf;
    }
    return s;
}

} // namespace dhaiq
