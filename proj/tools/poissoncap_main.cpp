#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "poissoncap/sweep.hpp"

namespace {

constexpr const char* kVersion = "poissoncap 1.0.0";

struct SolverFlags {
    double epsilon = 1e-6;
    int n_ba = 100;
    int n_ga = 20;
    double min_spacing = 1e-2;

    poissoncap::SolverConfig to_config() const {
        poissoncap::SolverConfig cfg;
        cfg.epsilon = epsilon;
        cfg.n_ba = n_ba;
        cfg.n_ga = n_ga;
        cfg.min_spacing = min_spacing;
        return cfg;
    }
};

void add_solver_flags(CLI::App* cmd, SolverFlags* flags) {
    cmd->add_option("--epsilon", flags->epsilon, "KKT tolerance (nats)")
        ->check(CLI::Range(1e-12, 0.999));
    cmd->add_option("--n-ba", flags->n_ba, "Blahut-Arimoto iterations per pass")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--n-ga", flags->n_ga, "gradient-ascent iterations per pass")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--min-spacing", flags->min_spacing,
                    "minimum support-point spacing")
        ->check(CLI::PositiveNumber);
}

// Grid spec: start:stop:count[,log|lin].
std::vector<double> parse_grid(const std::string& spec) {
    std::string range = spec;
    bool log_scale = false;
    if (const auto comma = spec.find(','); comma != std::string::npos) {
        range = spec.substr(0, comma);
        const std::string scale = spec.substr(comma + 1);
        if (scale == "log") log_scale = true;
        else if (scale != "lin") throw CLI::ValidationError("--grid", "scale must be log or lin");
    }
    double start = 0.0, stop = 0.0;
    int count = 0;
    if (std::sscanf(range.c_str(), "%lf:%lf:%d", &start, &stop, &count) != 3) {
        throw CLI::ValidationError("--grid", "expected start:stop:count[,log|lin]");
    }
    if (count < 1 || stop < start || start < 0.0) {
        throw CLI::ValidationError("--grid", "invalid grid range");
    }
    if (log_scale && start <= 0.0) {
        throw CLI::ValidationError("--grid", "log grid requires start > 0");
    }
    std::vector<double> grid;
    if (count == 1) {
        grid.push_back(start);
        return grid;
    }
    for (int i = 0; i < count; ++i) {
        const double frac = static_cast<double>(i) / (count - 1);
        grid.push_back(log_scale ? start * std::pow(stop / start, frac)
                                 : start + frac * (stop - start));
    }
    grid.back() = stop;
    return grid;
}

void print_result(const poissoncap::SweepRecord& r, bool bits) {
    std::printf("A = %g, lambda = %g\n", r.amplitude, r.dark_current);
    std::printf("capacity = %.9f nats", r.capacity_nats);
    if (bits) std::printf(" (%.9f bits)", r.capacity_bits);
    std::printf("\nduality gap = %.3e nats\n", r.duality_gap);
    std::printf("support (%d points):\n", r.n_points);
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        std::printf("  x = %-14.8g p = %.8g\n", r.points[i], r.probs[i]);
    }
    if (!r.converged) std::printf("WARNING: not converged\n");
}

void write_manifest(const std::string& output_path,
                    const poissoncap::SweepSpec& spec,
                    const poissoncap::SweepOutcome& outcome) {
    nlohmann::json manifest;
    manifest["tool_version"] = kVersion;
    manifest["config"] = {
        {"mode", spec.mode == poissoncap::SweepMode::amplitude ? "amplitude"
                 : spec.mode == poissoncap::SweepMode::dark_current ? "dark-current"
                                                                    : "single"},
        {"fixed_value", spec.fixed_value},
        {"grid", spec.grid},
        {"epsilon", spec.solver_config.epsilon},
        {"n_ba", spec.solver_config.n_ba},
        {"n_ga", spec.solver_config.n_ga},
        {"min_spacing", spec.solver_config.min_spacing},
        {"format", spec.format == poissoncap::ExportFormat::csv ? "csv" : "json"},
    };
    manifest["cold_start_checkpoints"] = outcome.cold_start_checkpoints;
    manifest["wall_clock_seconds"] = outcome.wall_clock_seconds;
    // Timestamps live here, outside the data files, so data stays byte-reproducible.
    manifest["generated_at_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    std::ofstream out(output_path + ".manifest.json");
    out << manifest.dump(2) << "\n";
}

void write_plot_script(const std::string& output_path) {
    std::ofstream out(output_path + ".plot.py");
    out << "#!/usr/bin/env python3\n"
           "\"\"\"Plot capacity and support structure from a sweep CSV.\"\"\"\n"
           "import csv, sys\n"
           "import matplotlib.pyplot as plt\n\n"
           "path = sys.argv[1] if len(sys.argv) > 1 else "
        << "\"" << output_path << "\"\n"
        << "rows = list(csv.DictReader(open(path)))\n"
           "sweep = [float(r['amplitude']) for r in rows]\n"
           "if len(set(sweep)) <= 1:\n"
           "    sweep = [float(r['dark_current']) for r in rows]\n"
           "    xlabel = 'dark current'\n"
           "else:\n"
           "    xlabel = 'amplitude'\n"
           "fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))\n"
           "ax1.plot(sweep, [float(r['capacity_nats']) for r in rows], '-o', ms=3)\n"
           "ax1.set_xlabel(xlabel); ax1.set_ylabel('capacity (nats)')\n"
           "for v, r in zip(sweep, rows):\n"
           "    pts = [float(p) for p in r['points'].split(';')]\n"
           "    ax2.plot([v] * len(pts), pts, 'k.', ms=2)\n"
           "ax2.set_xlabel(xlabel); ax2.set_ylabel('support points')\n"
           "plt.tight_layout(); plt.savefig(path + '.png', dpi=150)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Capacity of the amplitude-constrained Poisson channel"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve a single (A, lambda) instance");
    double amplitude = 0.0, dark_current = 0.0;
    std::string output, format = "csv";
    bool bits = false;
    SolverFlags flags;
    solve_cmd->add_option("--amplitude", amplitude, "amplitude constraint A")
        ->required()
        ->check(CLI::NonNegativeNumber);
    solve_cmd->add_option("--dark-current", dark_current, "dark current lambda")
        ->check(CLI::NonNegativeNumber);
    add_solver_flags(solve_cmd, &flags);
    solve_cmd->add_option("--output", output, "write the result record to this file");
    solve_cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    solve_cmd->add_flag("--bits", bits, "also print capacity in bits");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter, warm-started");
    std::string sweep_kind, grid_spec, sweep_output, sweep_format = "csv";
    double fixed_value = 0.0;
    bool plot_script = false;
    SolverFlags sweep_flags;
    sweep_cmd->add_option("--sweep", sweep_kind, "swept parameter")
        ->required()
        ->check(CLI::IsMember({"amplitude", "dark-current"}));
    sweep_cmd->add_option("--fixed", fixed_value,
                          "fixed parameter value (lambda for an amplitude sweep, A otherwise)")
        ->check(CLI::NonNegativeNumber);
    sweep_cmd->add_option("--grid", grid_spec, "grid as start:stop:count[,log|lin]")
        ->required();
    add_solver_flags(sweep_cmd, &sweep_flags);
    sweep_cmd->add_option("--output", sweep_output, "data file path")->required();
    sweep_cmd->add_option("--format", sweep_format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_flag("--plot-script", plot_script, "emit a plotting script next to the data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        if (solve_cmd->parsed()) {
            poissoncap::ChannelParams params{amplitude, dark_current};
            const auto result = poissoncap::solve(params, flags.to_config());
            const auto record = poissoncap::make_record(params, result);
            print_result(record, bits);
            if (!output.empty()) {
                poissoncap::export_records(
                    {record},
                    format == "json" ? poissoncap::ExportFormat::json
                                     : poissoncap::ExportFormat::csv,
                    output);
            }
            return result.converged ? 0 : 2;
        }

        poissoncap::SweepSpec spec;
        spec.mode = sweep_kind == "dark-current" ? poissoncap::SweepMode::dark_current
                                                 : poissoncap::SweepMode::amplitude;
        spec.fixed_value = fixed_value;
        spec.grid = parse_grid(grid_spec);
        spec.solver_config = sweep_flags.to_config();
        spec.output_path = sweep_output;
        spec.format = sweep_format == "json" ? poissoncap::ExportFormat::json
                                             : poissoncap::ExportFormat::csv;
        const auto outcome = poissoncap::run_sweep(spec);
        poissoncap::export_records(outcome.records, spec.format, spec.output_path);
        write_manifest(spec.output_path, spec, outcome);
        if (plot_script) write_plot_script(spec.output_path);

        int n_failed = 0;
        for (const auto& r : outcome.records) {
            if (!r.converged) ++n_failed;
        }
        std::printf("%zu points written to %s (%d not converged)\n",
                    outcome.records.size(), spec.output_path.c_str(), n_failed);
        return n_failed == 0 ? 0 : 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
