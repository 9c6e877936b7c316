// Command-line front end for the detection simulator.
//
//   dhaiq run            one scenario, aggregate CSV (per-seed rows with --per-seed)
//   dhaiq sweep          grid over n and z0, optionally both shift settings
//   dhaiq verify-claim   equal-division optimum and Hessian sign per k
//   dhaiq bound          innocent-ratio upper bound for the configured point
//   dhaiq export-topology  node and adjacency dumps of one seed

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dhaiq/experiment.hpp"

namespace {

struct Common
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> shift;
    std::optional<std::string> dist;
    std::vector<std::string> overrides;
    std::string out;
};

dhaiq::ScenarioConfig resolve(const Common& c)
{
    dhaiq::ScenarioConfig config;
    if (!c.config_path.empty())
        config = dhaiq::load_config(c.config_path, config);
    for (const std::string& kv : c.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw dhaiq::ConfigError("--set expects key=value, got " + kv);
        config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (c.seed)
        config.master_seed = *c.seed;
    if (c.shift)
        config.set("shift", *c.shift);
    if (c.dist)
        config.dist = dhaiq::parse_distribution(*c.dist);
    config.validate();
    return config;
}

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--config", c.config_path, "key=value configuration file");
    app->add_option("--seed", c.seed, "master seed");
    app->add_option("--shift", c.shift, "shift scheme on|off")->check(CLI::IsMember({"on", "off"}));
    app->add_option("--dist", c.dist, "adversary distribution")->check(CLI::IsMember({"uniform", "gaussian"}));
    app->add_option("--set", c.overrides, "override a configuration key (key=value), repeatable");
    app->add_option("--out", c.out, "output path (default stdout)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hierarchical watchdog detection of packet-modifying nodes under random linear network coding"};
    app.require_subcommand(1);

    Common run_opts;
    std::string per_seed_path;
    auto* run = app.add_subcommand("run", "run one scenario over runs_per_point seeds");
    add_common(run, run_opts);
    run->add_option("--per-seed", per_seed_path, "also write per-seed rows to this path");

    Common sweep_opts;
    std::vector<int> z0_list{5, 15, 25, 35, 45};
    std::vector<int> n_list{400};
    std::string plot_path;
    auto* sweep = app.add_subcommand("sweep", "sweep adversary and node counts");
    add_common(sweep, sweep_opts);
    sweep->add_option("--z0", z0_list, "adversary counts")->delimiter(',');
    sweep->add_option("--n", n_list, "node counts")->delimiter(',');
    sweep->add_option("--plot", plot_path, "write an SVG plot of ratio against z0");

    std::vector<int> k_list{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    double resolution = 0.01;
    std::string claim_out;
    auto* claim = app.add_subcommand("verify-claim", "check the equal-division optimum per adversary count");
    claim->add_option("--k", k_list, "adversary counts in [1, 10]")->delimiter(',');
    claim->add_option("--resolution", resolution, "simplex grid step");
    claim->add_option("--out", claim_out, "output path (default stdout)");

    Common bound_opts;
    auto* bound = app.add_subcommand("bound", "innocent-ratio upper bound (mu - 1) z0 / n");
    add_common(bound, bound_opts);

    Common topo_opts;
    int topo_index = 0;
    std::string adjacency_path;
    auto* topo = app.add_subcommand("export-topology", "dump node positions and adjacency of one seed");
    add_common(topo, topo_opts);
    topo->add_option("--index", topo_index, "seed index within the scenario");
    topo->add_option("--adjacency", adjacency_path, "adjacency dump path (default: <out>.adj or stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const dhaiq::ScenarioConfig config = resolve(run_opts);
            const dhaiq::ScenarioResult result = dhaiq::run_scenario(config);
            std::ostringstream csv;
            dhaiq::write_csv(csv, {result.aggregate});
            if (!per_seed_path.empty()) {
                std::ostringstream seeds;
                dhaiq::write_seed_csv(seeds, result.per_seed);
                emit(per_seed_path, seeds.str());
            }
            emit(run_opts.out, csv.str());
        } else if (*sweep) {
            const dhaiq::ScenarioConfig config = resolve(sweep_opts);
            std::vector<bool> shifts{false, true};
            if (sweep_opts.shift)
                shifts = {config.shift};
            const auto rows = dhaiq::sweep(config, z0_list, n_list, shifts);
            std::ostringstream csv;
            dhaiq::write_csv(csv, rows);
            if (!plot_path.empty()) {
                std::ostringstream svg;
                dhaiq::write_svg_plot(svg, rows);
                emit(plot_path, svg.str());
            }
            emit(sweep_opts.out, csv.str());
        } else if (*claim) {
            const dhaiq::ClaimReport report = dhaiq::verify_claim(k_list, resolution);
            std::ostringstream text;
            dhaiq::write_claim_report(text, report);
            emit(claim_out, text.str());
            return report.ok ? 0 : 1;
        } else if (*bound) {
            const dhaiq::ScenarioConfig config = resolve(bound_opts);
            const double b = dhaiq::analysis::innocent_bound<double>(config.threshold, config.z0, config.n);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6g\n", b);
            emit(bound_opts.out, buf);
        } else if (*topo) {
            const dhaiq::ScenarioConfig config = resolve(topo_opts);
            const dhaiq::Network net = dhaiq::build_network(config, topo_index);
            std::ostringstream nodes, adjacency;
            dhaiq::write_nodes(nodes, net.nodes);
            dhaiq::write_adjacency(adjacency, net.graph);
            std::string adj_path = adjacency_path;
            if (adj_path.empty() && !topo_opts.out.empty() && topo_opts.out != "-")
                adj_path = topo_opts.out + ".adj";
            emit(topo_opts.out, nodes.str());
            emit(adj_path, adjacency.str());
        }
    } catch (const dhaiq::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
