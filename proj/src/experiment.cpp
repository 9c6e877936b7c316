#include "dhaiq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace dhaiq {

namespace {

enum : std::uint64_t { kTopologyStream = 1, kProtocolStream = 2 };

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text)
{
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("bad value for '" + key + "': " + text);
    return value;
}

bool parse_switch(const std::string& key, const std::string& text)
{
    if (text == "on" || text == "true" || text == "1" || text == "yes")
        return true;
    if (text == "off" || text == "false" || text == "0" || text == "no")
        return false;
    throw ConfigError("bad value for '" + key + "': " + text + " (expected on|off)");
}

CorruptionMode parse_corruption(const std::string& text)
{
    if (text == "payload")
        return CorruptionMode::Payload;
    if (text == "coefficients")
        return CorruptionMode::Coefficients;
    if (text == "both")
        return CorruptionMode::Both;
    throw ConfigError("bad corruption mode: " + text + " (expected payload|coefficients|both)");
}

std::string fmt6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double mean_of(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v)
{
    if (v.size() < 2)
        return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v)
        s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

} // namespace

void ScenarioConfig::validate() const
{
    if (n < 1)
        throw ConfigError("n must be at least 1");
    if (z0 < 0 || z0 > n)
        throw ConfigError("z0 must lie in [0, n]");
    if (!(side > 0.0))
        throw ConfigError("W must be positive");
    if (!(range > 0.0))
        throw ConfigError("r must be positive");
    if (!(threshold >= 1.0))
        throw ConfigError("mu must be at least 1");
    if (runs_per_point < 1)
        throw ConfigError("runs_per_point must be at least 1");
    if (field_degree < GaloisField::kMinDegree || field_degree > GaloisField::kMaxDegree)
        throw ConfigError("u must lie in [1, 16]");
    if (payload_length < 1)
        throw ConfigError("p must be at least 1");
    if (sigma < 0.0)
        throw ConfigError("sigma must be non-negative");
    if (threads < 1)
        throw ConfigError("threads must be at least 1");
}

void ScenarioConfig::set(const std::string& key, const std::string& value)
{
    if (key == "n")
        n = parse_number<int>(key, value);
    else if (key == "W")
        side = parse_number<double>(key, value);
    else if (key == "r")
        range = parse_number<double>(key, value);
    else if (key == "z0")
        z0 = parse_number<int>(key, value);
    else if (key == "dist")
        dist = parse_distribution(value);
    else if (key == "sigma")
        sigma = parse_number<double>(key, value);
    else if (key == "mu")
        threshold = parse_number<double>(key, value);
    else if (key == "shift")
        shift = parse_switch(key, value);
    else if (key == "runs_per_point")
        runs_per_point = parse_number<int>(key, value);
    else if (key == "u")
        field_degree = parse_number<int>(key, value);
    else if (key == "p")
        payload_length = parse_number<int>(key, value);
    else if (key == "master_seed")
        master_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "corruption")
        corruption = parse_corruption(value);
    else if (key == "act_normal")
        act_normal = parse_switch(key, value);
    else if (key == "silent_watchdogs")
        silent_watchdogs = parse_switch(key, value);
    else if (key == "threads")
        threads = parse_number<int>(key, value);
    else
        throw ConfigError("unknown configuration key: " + key);
}

ProtocolConfig ScenarioConfig::protocol() const
{
    ProtocolConfig p;
    p.payload_length = static_cast<std::size_t>(payload_length);
    p.threshold = threshold;
    p.adversary = {corruption, act_normal, silent_watchdogs};
    return p;
}

AdversaryPlacement ScenarioConfig::placement() const
{
    if (dist == AdversaryDistribution::Uniform)
        return AdversaryPlacement::uniform();
    AdversaryPlacement g = AdversaryPlacement::gaussian_centered(side);
    if (sigma > 0.0)
        g.sigma = sigma;
    return g;
}

ScenarioConfig parse_config(std::istream& in, ScenarioConfig base)
{
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

ScenarioConfig load_config(const std::string& path, ScenarioConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    return parse_config(in, base);
}

std::string to_string(AdversaryDistribution dist)
{
    return dist == AdversaryDistribution::Uniform ? "uniform" : "gaussian";
}

AdversaryDistribution parse_distribution(const std::string& text)
{
    if (text == "uniform")
        return AdversaryDistribution::Uniform;
    if (text == "gaussian")
        return AdversaryDistribution::Gaussian;
    throw ConfigError("bad distribution: " + text + " (expected uniform|gaussian)");
}

Network build_network(const ScenarioConfig& config, int seed_index)
{
    Rng rng(derive_seed(config.master_seed,
                        {kTopologyStream, static_cast<std::uint64_t>(config.n), static_cast<std::uint64_t>(config.z0),
                         static_cast<std::uint64_t>(config.dist), static_cast<std::uint64_t>(seed_index)}));
    Network net;
    net.side = config.side;
    net.nodes = place_nodes(config.n, config.side, rng);
    place_adversaries(net.nodes, config.z0, config.placement(), rng);
    net.graph = build_graph(net.nodes, config.range);
    return net;
}

SeedResult run_seed(const ScenarioConfig& config, const GaloisField& field, int seed_index)
{
    const Network net = build_network(config, seed_index);
    Rng rng(derive_seed(config.master_seed,
                        {kProtocolStream, static_cast<std::uint64_t>(config.n), static_cast<std::uint64_t>(config.z0),
                         static_cast<std::uint64_t>(config.dist), static_cast<std::uint64_t>(config.shift),
                         static_cast<std::uint64_t>(seed_index)}));
    const ProtocolConfig protocol = config.protocol();

    SeedResult r;
    r.seed_index = seed_index;
    if (config.shift) {
        const ShiftOutcome out = run_with_shift(net, field, protocol, rng);
        r.innocent_ratio = out.ratios.innocent_ratio;
        r.catch_ratio = out.ratios.catch_ratio;
        r.marked = out.final_suspects.size();
        for (const RunMetrics& m : out.runs) {
            r.transmissions += static_cast<double>(m.probe_transmissions);
            r.rounds += m.rounds_elapsed;
        }
    } else {
        SuspectTable suspects(net.size());
        const RunMetrics m = dhaiq_run(net, field, protocol, 0, Point::Zero(), suspects, rng);
        r.innocent_ratio = m.innocent_ratio;
        r.catch_ratio = m.catch_ratio;
        r.marked = m.marked.size();
        r.transmissions = static_cast<double>(m.probe_transmissions);
        r.rounds = m.rounds_elapsed;
    }
    return r;
}

ScenarioResult run_scenario(const ScenarioConfig& config)
{
    config.validate();
    const GaloisField field(config.field_degree);
    ScenarioResult result;
    result.per_seed.resize(static_cast<std::size_t>(config.runs_per_point));

    std::atomic<int> next{0};
    auto worker = [&] {
        for (int s = next++; s < config.runs_per_point; s = next++)
            result.per_seed[static_cast<std::size_t>(s)] = run_seed(config, field, s);
    };
    const int workers = std::min(config.threads, config.runs_per_point);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < workers; ++t)
            pool.emplace_back(worker);
    }

    std::vector<double> innocent, caught, tx, rounds;
    for (const SeedResult& r : result.per_seed) {
        innocent.push_back(r.innocent_ratio);
        caught.push_back(r.catch_ratio);
        tx.push_back(r.transmissions);
        rounds.push_back(r.rounds);
    }
    Aggregate& a = result.aggregate;
    a.n = config.n;
    a.z0 = config.z0;
    a.dist = config.dist;
    a.shift = config.shift;
    a.mean_innocent = mean_of(innocent);
    a.sd_innocent = sd_of(innocent);
    a.mean_catch = mean_of(caught);
    a.sd_catch = sd_of(caught);
    a.mean_tx = mean_of(tx);
    a.mean_rounds = mean_of(rounds);
    a.seeds = config.runs_per_point;
    return result;
}

std::vector<Aggregate> sweep(const ScenarioConfig& base, const std::vector<int>& z0_values,
                             const std::vector<int>& n_values, const std::vector<bool>& shift_values)
{
    if (z0_values.empty() || n_values.empty() || shift_values.empty())
        throw ConfigError("sweep needs non-empty n, z0 and shift lists");
    std::vector<ScenarioConfig> cells;
    for (int n : n_values)
        for (bool shift : shift_values)
            for (int z0 : z0_values) {
                ScenarioConfig c = base;
                c.n = n;
                c.z0 = z0;
                c.shift = shift;
                c.validate();
                cells.push_back(c);
            }
    std::vector<Aggregate> rows;
    for (const ScenarioConfig& c : cells)
        rows.push_back(run_scenario(c).aggregate);
    return rows;
}

const char* const kCsvHeader = "n,z0,dist,shift,mean_innocent,sd_innocent,mean_catch,sd_catch,mean_tx,mean_rounds,seeds";

void write_csv(std::ostream& os, const std::vector<Aggregate>& rows)
{
    os << kCsvHeader << '\n';
    for (const Aggregate& a : rows)
        os << a.n << ',' << a.z0 << ',' << to_string(a.dist) << ',' << (a.shift ? "on" : "off") << ','
           << fmt6(a.mean_innocent) << ',' << fmt6(a.sd_innocent) << ',' << fmt6(a.mean_catch) << ','
           << fmt6(a.sd_catch) << ',' << fmt6(a.mean_tx) << ',' << fmt6(a.mean_rounds) << ',' << a.seeds << '\n';
}

void write_seed_csv(std::ostream& os, const std::vector<SeedResult>& rows)
{
    os << "seed,innocent,catch,tx,rounds,marked\n";
    for (const SeedResult& r : rows)
        os << r.seed_index << ',' << fmt6(r.innocent_ratio) << ',' << fmt6(r.catch_ratio) << ','
           << fmt6(r.transmissions) << ',' << fmt6(r.rounds) << ',' << r.marked << '\n';
}

void write_svg_plot(std::ostream& os, const std::vector<Aggregate>& rows)
{
    constexpr double kWidth = 640, kHeight = 400, kMargin = 50;
    int z_max = 1;
    for (const Aggregate& a : rows)
        z_max = std::max(z_max, a.z0);
    auto px = [&](int z0) { return kMargin + (kWidth - 2 * kMargin) * z0 / z_max; };
    auto py = [&](double v) { return kHeight - kMargin - (kHeight - 2 * kMargin) * std::clamp(v, 0.0, 1.0); };

    std::map<std::string, std::vector<const Aggregate*>> series;
    for (const Aggregate& a : rows)
        series[std::to_string(a.n) + ' ' + to_string(a.dist) + " shift " + (a.shift ? "on" : "off")].push_back(&a);

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << kMargin << "\" y1=\"" << py(0) << "\" x2=\"" << kWidth - kMargin << "\" y2=\"" << py(0)
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kMargin << "\" y1=\"" << py(0) << "\" x2=\"" << kMargin << "\" y2=\"" << py(1)
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10 << "\" font-size=\"12\">z0</text>\n";
    static const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    int idx = 0;
    for (const auto& [label, points] : series) {
        const char* colour = palette[idx % 6];
        for (int metric = 0; metric < 2; ++metric) {
            os << "<polyline fill=\"none\" stroke=\"" << colour << "\""
               << (metric ? " stroke-dasharray=\"4 3\"" : "") << " points=\"";
            for (const Aggregate* a : points)
                os << px(a->z0) << ',' << py(metric ? a->mean_catch : a->mean_innocent) << ' ';
            os << "\"/>\n";
        }
        os << "<text x=\"" << kMargin + 10 << "\" y=\"" << 20 + 14 * idx << "\" font-size=\"11\" fill=\"" << colour
           << "\">" << label << " (solid innocent, dashed catch)</text>\n";
        ++idx;
    }
    os << "</svg>\n";
}

ClaimReport verify_claim(const std::vector<int>& k_values, double resolution)
{
    ClaimReport report;
    for (int k : k_values) {
        if (k < 1 || k > 10)
            throw ConfigError("verify-claim: k must lie in [1, 10], got " + std::to_string(k));
        ClaimRow row;
        row.k = k;
        row.optimum = analysis::optimal_division<double>(k, resolution);
        row.lambda = analysis::lagrange_multiplier(k);
        row.g = analysis::hessian_diag(k);
        row.residual = analysis::stationarity_residual(analysis::equal_quarters<double>(), k, row.lambda);
        row.equal_quarters = (row.optimum.array() - 0.25).abs().maxCoeff() <= 1e-6;
        row.boundary = row.g == 0.0;
        if (k <= 6)
            row.ok = row.equal_quarters && row.g < 0.0 && row.residual <= 1e-12;
        report.ok = report.ok && row.ok;
        report.rows.push_back(row);
    }
    return report;
}

void write_claim_report(std::ostream& os, const ClaimReport& report)
{
    os << "k,a1,a2,a3,a4,lambda,g,residual,regime,status\n";
    for (const ClaimRow& r : report.rows) {
        const char* regime = r.boundary ? "boundary" : (r.g < 0.0 ? "maximum" : "not-maximum");
        os << r.k << ',' << fmt6(r.optimum[0]) << ',' << fmt6(r.optimum[1]) << ',' << fmt6(r.optimum[2]) << ','
           << fmt6(r.optimum[3]) << ',' << fmt6(r.lambda) << ',' << fmt6(r.g) << ',' << fmt6(r.residual) << ','
           << regime << ',' << (r.ok ? "ok" : "FAIL") << '\n';
    }
}

} // namespace dhaiq
