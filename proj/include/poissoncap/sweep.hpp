#pragma once

#include <string>
#include <vector>

#include "poissoncap/solver.hpp"

namespace poissoncap {

enum class SweepMode { single, amplitude, dark_current };
enum class ExportFormat { csv, json };

struct SweepSpec {
    SweepMode mode = SweepMode::single;
    double fixed_value = 0.0;  // lambda for an amplitude sweep, A for a dark-current sweep
    std::vector<double> grid;  // strictly increasing, nonnegative
    SolverConfig solver_config;
    std::string output_path;
    ExportFormat format = ExportFormat::csv;
};

// One row of sweep output; the regenerated equivalent of the published
// simulation data.
struct SweepRecord {
    double amplitude = 0.0;
    double dark_current = 0.0;
    double capacity_nats = 0.0;
    double capacity_bits = 0.0;
    int n_points = 0;
    double duality_gap = 0.0;
    double kkt_residual = 0.0;  // max support-density deviation from i(0)
    double eq11_bound = 0.0;
    bool converged = false;
    int outer_iterations = 0;
    std::vector<double> points;
    std::vector<double> probs;
};

SweepRecord make_record(const ChannelParams& params, const SolveResult& result);

struct SweepOutcome {
    std::vector<SweepRecord> records;
    std::vector<double> wall_clock_seconds;  // per grid point
    std::vector<std::size_t> cold_start_checkpoints;
};

// Runs the solves in grid order with warm starting. Up to 8 log-spaced
// checkpoints are re-solved from a cold start; the better result (converged
// first, then higher capacity) is kept. Non-converged points are recorded and
// the sweep continues. Throws std::invalid_argument on a bad spec.
SweepOutcome run_sweep(const SweepSpec& spec);

// Fixed CSV column order; points/probs are semicolon-joined at 12 significant
// digits, scalars use shortest round-trip decimals.
std::string to_csv(const std::vector<SweepRecord>& records);
std::string to_json(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> from_csv(const std::string& text);
std::vector<SweepRecord> from_json(const std::string& text);

// Writes records to path in the given format. Throws std::runtime_error with
// the path on I/O failure.
void export_records(const std::vector<SweepRecord>& records,
                    ExportFormat format,
                    const std::string& path);

}  // namespace poissoncap
