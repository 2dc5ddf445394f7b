#include "xchain/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "xchain/error.hpp"
#include "xchain/scenario_config.hpp"
#include "xchain/sim.hpp"

namespace xchain::cli {

namespace {

struct Options {
    std::optional<std::uint64_t> seed;
    std::optional<Tick> duration;
    bool quiet = false;
    std::string config;
    std::string out_dir;
    std::string preset;
};

void print_pairs(const std::vector<std::pair<ChainId, ChainId>>& pairs, std::ostream& os) {
    for (const auto& [a, b] : pairs) os << "  unreachable: " << to_string(a) << " -> " << to_string(b) << '\n';
}

// Strong connectivity gate shared by validate-topology and run.
bool topology_ok(const TopologyGraph& g, std::ostream& out, std::ostream& err) {
    if (g.nodes().empty()) {
        err << "topology has no blockchains\n";
        return false;
    }
    if (is_strongly_connected(g)) return true;
    err << "topology is not strongly connected\n";
    print_pairs(unreachable_pairs(g), out);
    return false;
}

int validate_topology_cmd(const Options& o, std::ostream& out, std::ostream& err) {
    const TopologyGraph g = build_graph(parse_topology(read_text_file(o.config)));
    if (!topology_ok(g, out, err)) return kExitDomain;
    if (!o.quiet)
        out << "ok: " << g.nodes().size() << " blockchains, " << g.edges().size() << " connections, diameter "
            << diameter(g) << '\n';
    return kExitOk;
}

int run_cmd(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.config.empty() == o.preset.empty()) {
        err << "run needs exactly one of a config path or --preset\n";
        return kExitInput;
    }
    if (o.out_dir.empty()) {
        err << "run needs --out <dir>\n";
        return kExitInput;
    }
    Scenario s = o.preset.empty() ? load_scenario(o.config) : preset(o.preset);
    if (o.seed) s.seed = *o.seed;
    if (o.duration) s.duration_ticks = *o.duration;
    validate(s);
    if (!topology_ok(build_graph(s.topology), out, err)) return kExitDomain;

    const auto start = std::chrono::steady_clock::now();
    const MetricsLog log = run(s);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    write_csv(log, o.out_dir);
    std::string summary = format_report(summarize(log, s.warmup_fraction));
    for (const auto& m : log.membership) {
        summary += "membership tick " + std::to_string(m.tick) + ' ' +
                   (m.action == ProposalAction::AddEdge ? "add " : "remove ") + to_string(m.edge.from) + "->" +
                   to_string(m.edge.to) + ' ' + to_string(m.status);
        summary += m.reason.empty() ? "\n" : " (" + m.reason + ")\n";
    }
    std::ofstream(std::filesystem::path(o.out_dir) / "summary.txt") << "scenario " << s.name << " seed " << s.seed
                                                                     << '\n'
                                                                     << summary;
    for (const auto& f : log.faults) err << "fault: " << f << '\n';
    if (!o.quiet) {
        out << "scenario " << s.name << ": " << s.duration_ticks << " ticks in " << std::fixed << std::setprecision(2)
            << secs << " s\n"
            << summary;
    }
    return kExitOk;
}

int analyze_security_cmd(const Options& o, std::ostream& out, std::ostream&) {
    const SecurityConfig cfg = parse_security(read_text_file(o.config));
    validate(cfg.probabilities);
    if (cfg.sets.empty()) throw InputError("no chain sets to analyze");
    out << "chains,pb,pf,intact,total\n";
    for (const auto& set : cfg.sets) {
        const double pb = fake_probability(cfg.probabilities, set);
        const double pf = detect_probability(cfg.probabilities, set);
        const double intact = intact_probability(cfg.probabilities, set);
        std::string names;
        for (auto id : set) names += (names.empty() ? "" : "+") + to_string(id);
        out << names << ',' << std::setprecision(6) << pb << ',' << pf << ',' << intact << ',' << (pb + pf + intact)
            << '\n';
    }
    return kExitOk;
}

int report_cmd(const Options& o, std::ostream& out, std::ostream&) {
    out << format_report(summarize(read_csv(o.out_dir)));
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Cross-chain propagation simulator"};
    app.require_subcommand(1, 1);
    app.add_option("--seed", o.seed, "Override the scenario seed");
    app.add_option("--duration-ticks", o.duration, "Override the scenario duration");
    app.add_flag("--quiet", o.quiet, "Only print errors");

    auto* validate_app = app.add_subcommand("validate-topology", "Check that a topology is strongly connected");
    validate_app->add_option("config", o.config, "Scenario file")->required();

    auto* run_app = app.add_subcommand("run", "Run a scenario and write CSV metrics");
    run_app->add_option("config", o.config, "Scenario file");
    run_app->add_option("--preset", o.preset, "Bundled scenario name");
    run_app->add_option("--out", o.out_dir, "Output directory");

    auto* analyze_app = app.add_subcommand("analyze", "Analyses");
    analyze_app->require_subcommand(1, 1);
    auto* security_app = analyze_app->add_subcommand("security", "Fake and detection probabilities per chain set");
    security_app->add_option("config", o.config, "Scenario file")->required();

    auto* report_app = app.add_subcommand("report", "Summarize the CSVs of a previous run");
    report_app->add_option("out_dir", o.out_dir, "Directory written by run")->required();

    auto* presets_app = app.add_subcommand("presets", "List bundled scenarios");

    // Global flags are accepted after the subcommand too.
    for (auto* sub : {validate_app, run_app, security_app, report_app}) {
        sub->add_option("--seed", o.seed);
        sub->add_option("--duration-ticks", o.duration);
        sub->add_flag("--quiet", o.quiet);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitInput;
    }

    try {
        if (validate_app->parsed()) return validate_topology_cmd(o, out, err);
        if (run_app->parsed()) return run_cmd(o, out, err);
        if (security_app->parsed()) return analyze_security_cmd(o, out, err);
        if (report_app->parsed()) return report_cmd(o, out, err);
        if (presets_app->parsed()) {
            for (const auto& name : preset_names()) out << name << '\n';
            return kExitOk;
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}

}  // namespace xchain::cli
