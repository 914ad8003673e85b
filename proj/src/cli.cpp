/*
 * Copyright 2026 The camsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "camsim/cli.hpp"

#include "camsim/metrics.hpp"
#include "camsim/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>

namespace camsim {

namespace {

std::optional<ExportFormat> parse_format(const std::string& s) {
    if (s == "structured")
        return ExportFormat::Structured;
    if (s == "tabular")
        return ExportFormat::Tabular;
    return std::nullopt;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open '" + p.string() + "' for writing");
    f << text;
    f.flush();
    if (!f)
        throw IoError("failed writing '" + p.string() + "'");
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw IoError("cannot create output directory '" + dir.string() + "'");
}

SimReport load_report(const std::filesystem::path& p) {
    std::error_code ec;
    if (std::filesystem::is_directory(p, ec))
        return read_report(p / "report.json");
    return read_report(p);
}

void print_summary(const SimReport& r, std::ostream& out) {
    const auto& a = r.aggregates;
    out << "scenario " << r.scenario << " (topology " << r.topology_digest << ")\n";
    out << "  frames: generated " << a.generated << ", delivered " << a.delivered
        << ", dropped " << a.dropped << ", in flight " << a.in_flight << "\n";
    out << "  latency ns: min " << a.latency_min_ns << ", p50 " << a.latency_p50_ns << ", p99 "
        << a.latency_p99_ns << ", max " << a.latency_max_ns << "\n";
    out << "  throughput " << format_double(a.throughput_gbps) << " Gb/s, copy_count "
        << a.copy_count << ", timestamp rms " << format_double(a.timestamp_rms_ns) << " ns\n";
    if (a.first_drop_ns)
        out << "  first drop at " << *a.first_drop_ns << " ns\n";
    for (const auto& v : a.violations) {
        out << "  violation " << to_string(v.kind);
        if (v.frame_id)
            out << " frame " << *v.frame_id;
        out << ": " << format_double(v.measured_ns) << " > " << format_double(v.limit_ns)
            << "\n";
    }
}

struct BudgetArgs {
    std::vector<int> gens;
    std::vector<int> lanes;
    double efficiency = 1.0;
    bool all = false;
    bool presets = false;
    std::string format = "text";
};

int cmd_budget(const BudgetArgs& a, std::ostream& out, std::ostream& err) {
    if (!(a.efficiency > 0.0 && a.efficiency <= 1.0)) {
        err << "budget: --efficiency must lie in (0, 1]\n";
        return kExitConfig;
    }
    std::vector<int> gens = a.gens;
    std::vector<int> lanes = a.lanes;
    if (gens.empty() || a.all)
        gens = {1, 2, 3, 4, 5};
    if (lanes.empty() || a.all)
        lanes.assign(std::begin(kLaneWidths), std::end(kLaneWidths));
    auto rows = budget_table(gens, lanes, a.efficiency, a.presets || a.all);
    if (a.format == "structured")
        out << budget_table_json(rows);
    else if (a.format == "tabular")
        out << budget_table_csv(rows);
    else
        out << render_budget_table(rows);
    return kExitOk;
}

struct SimulateArgs {
    std::string scenario;
    std::string output = "camsim-out";
    std::optional<std::uint64_t> seed;
    std::string format;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    Scenario sc;
    try {
        sc = load_scenario(a.scenario, a.seed);
    } catch (const IoError& e) {
        err << "simulate: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "simulate: " << e.what() << "\n";
        return kExitConfig;
    }
    for (const auto& w : sc.warnings)
        err << "warning: " << w << "\n";

    ScenarioRun run;
    try {
        run = run_scenario(sc);
    } catch (const std::exception& e) {
        err << "simulate: " << e.what() << "\n";
        return kExitConfig;
    }

    auto only = parse_format(a.format);
    try {
        std::filesystem::path root(a.output);
        if (run.reports.size() == 1) {
            write_report(run.reports.front(), root, only);
        } else {
            ensure_dir(root);
            for (std::size_t i = 0; i < run.reports.size(); ++i)
                write_report(run.reports[i], root / ("camera_" + std::to_string(i)), only);
            write_text(root / "summary.json", run.summary->dump(1) + "\n");
        }
    } catch (const IoError& e) {
        err << "simulate: " << e.what() << "\n";
        return kExitIo;
    }

    for (const auto& r : run.reports)
        print_summary(r, out);
    if (run.summary) {
        const auto& s = *run.summary;
        out << "aggregate demand " << format_double(s["aggregate_demand_gbps"].get<double>())
            << " Gb/s against " << format_double(s["aggregate_pcie_gbps"].get<double>())
            << " Gb/s of PCIe\n";
    }
    return run.has_violations() ? kExitViolations : kExitOk;
}

struct CompareArgs {
    std::string a;
    std::string b;
    std::string output;
    std::string format;
};

int cmd_compare(const CompareArgs& c, std::ostream& out, std::ostream& err) {
    SimReport ra;
    SimReport rb;
    try {
        ra = load_report(c.a);
        rb = load_report(c.b);
    } catch (const IoError& e) {
        err << "compare: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "compare: " << e.what() << "\n";
        return kExitConfig;
    }
    DeltaTable t;
    try {
        t = compare(ra, rb);
    } catch (const IncomparableRuns& e) {
        err << "compare: " << e.what() << "\n";
        return kExitConfig;
    }
    out << render_delta_table(t);
    if (!c.output.empty()) {
        auto only = parse_format(c.format);
        try {
            std::filesystem::path dir(c.output);
            ensure_dir(dir);
            if (!only || *only == ExportFormat::Structured)
                write_text(dir / "delta.json", delta_table_json(t));
            if (!only || *only == ExportFormat::Tabular)
                write_text(dir / "delta.csv", delta_table_csv(t));
        } catch (const IoError& e) {
            err << "compare: " << e.what() << "\n";
            return kExitIo;
        }
    }
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Camera acquisition pipeline simulator", "camsim"};
    app.require_subcommand(1);

    BudgetArgs budget;
    auto* b = app.add_subcommand("budget", "Effective link rates in Gb/s");
    b->add_option("--gen", budget.gens, "PCIe generations")->check(CLI::Range(1, 5));
    b->add_option("--lanes", budget.lanes, "Lane widths")->check(CLI::IsMember({1, 2, 4, 8, 16}));
    b->add_option("--efficiency", budget.efficiency, "Protocol efficiency in (0, 1]");
    b->add_flag("--all", budget.all, "Every generation and width, plus interface presets");
    b->add_flag("--presets", budget.presets, "Append interface presets");
    b->add_option("--format", budget.format, "text, structured (JSON) or tabular (CSV)")
        ->check(CLI::IsMember({"text", "structured", "tabular"}));

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Run a scenario file");
    s->add_option("scenario", sim.scenario, "Scenario JSON")->required();
    s->add_option("--output", sim.output, "Output directory");
    s->add_option("--seed", sim.seed, "Override the scenario seed");
    s->add_option("--format", sim.format, "Write only structured or only tabular output")
        ->check(CLI::IsMember({"structured", "tabular"}));

    CompareArgs cmp;
    auto* c = app.add_subcommand("compare", "Metric deltas between two reports (b - a)");
    c->add_option("a", cmp.a, "Report file or directory")->required();
    c->add_option("b", cmp.b, "Report file or directory")->required();
    c->add_option("--output", cmp.output, "Directory for delta.json / delta.csv");
    c->add_option("--format", cmp.format, "Write only structured or only tabular output")
        ->check(CLI::IsMember({"structured", "tabular"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "camsim: " << e.what() << "\n\n" << app.help();
        return kExitConfig;
    }

    if (b->parsed())
        return cmd_budget(budget, out, err);
    if (s->parsed())
        return cmd_simulate(sim, out, err);
    return cmd_compare(cmp, out, err);
}

} // namespace camsim
