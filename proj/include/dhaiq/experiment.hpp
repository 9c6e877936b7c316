#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dhaiq/analysis.hpp"
#include "dhaiq/protocol.hpp"
#include "dhaiq/topology.hpp"

namespace dhaiq {

class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// One simulation scenario. Defaults follow the reference deployment:
/// 400 nodes on an 800 x 800 square with radio range 50.
struct ScenarioConfig
{
    int n = 400;
    double side = 800.0;
    double range = 50.0;
    int z0 = 0;
    AdversaryDistribution dist = AdversaryDistribution::Uniform;
    double sigma = 0.0; // gaussian spread, 0 means side / 8
    double threshold = 5.0;
    bool shift = false;
    int runs_per_point = 30;
    int field_degree = 8;
    int payload_length = 16;
    std::uint64_t master_seed = 1;
    CorruptionMode corruption = CorruptionMode::Both;
    bool act_normal = false;
    bool silent_watchdogs = false;
    int threads = 1;

    /// Throws ConfigError naming the first violated constraint.
    void validate() const;

    /// Sets one key from its text form. Throws ConfigError on unknown keys or bad values.
    void set(const std::string& key, const std::string& value);

    ProtocolConfig protocol() const;
    AdversaryPlacement placement() const;
};

/// Reads `key = value` lines; '#' starts a comment.
ScenarioConfig parse_config(std::istream& in, ScenarioConfig base = {});
ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {});

std::string to_string(AdversaryDistribution dist);
AdversaryDistribution parse_distribution(const std::string& text);

/// Topology and adversaries of one seed. Depends on (master_seed, n, z0, dist,
/// seed index) but not on the shift setting, so shift on/off runs are paired.
Network build_network(const ScenarioConfig& config, int seed_index);

struct SeedResult
{
    int seed_index = 0;
    double innocent_ratio = 0.0;
    double catch_ratio = 1.0;
    double transmissions = 0.0;
    double rounds = 0.0;
    std::size_t marked = 0;
};

struct Aggregate
{
    int n = 0;
    int z0 = 0;
    AdversaryDistribution dist = AdversaryDistribution::Uniform;
    bool shift = false;
    double mean_innocent = 0.0;
    double sd_innocent = 0.0;
    double mean_catch = 0.0;
    double sd_catch = 0.0;
    double mean_tx = 0.0;
    double mean_rounds = 0.0;
    int seeds = 0;
};

struct ScenarioResult
{
    std::vector<SeedResult> per_seed;
    Aggregate aggregate;
};

SeedResult run_seed(const ScenarioConfig& config, const GaloisField& field, int seed_index);

/// All seeds of one scenario, spread over config.threads workers. Output does
/// not depend on the thread count.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// One aggregate per (n, z0, shift) cell, in the order n, then shift, then z0.
std::vector<Aggregate> sweep(const ScenarioConfig& base, const std::vector<int>& z0_values,
                             const std::vector<int>& n_values, const std::vector<bool>& shift_values);

extern const char* const kCsvHeader;
void write_csv(std::ostream& os, const std::vector<Aggregate>& rows);
void write_seed_csv(std::ostream& os, const std::vector<SeedResult>& rows);

/// Innocent and catch ratio against z0, one polyline per (n, dist, shift).
void write_svg_plot(std::ostream& os, const std::vector<Aggregate>& rows);

struct ClaimRow
{
    int k = 0;
    analysis::Division<double> optimum;
    double lambda = 0.0;
    double g = 0.0;
    double residual = 0.0; // stationarity at equal quarters
    bool equal_quarters = false;
    bool boundary = false; // g(k) == 0
    bool ok = true;
};

struct ClaimReport
{
    std::vector<ClaimRow> rows;
    bool ok = true;
};

/// Optimum, multiplier and Hessian sign per k. Rows with k <= 6 must land on
/// equal quarters with g < 0; k = 7 is flagged as the boundary.
ClaimReport verify_claim(const std::vector<int>& k_values, double resolution = 0.01);
void write_claim_report(std::ostream& os, const ClaimReport& report);

} // namespace dhaiq
