#include "poissoncap/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace poissoncap {

namespace {

constexpr const char* kCsvHeader =
    "amplitude,dark_current,capacity_nats,capacity_bits,n_points,duality_gap,"
    "kkt_residual,eq11_bound,converged,outer_iterations,points,probs";

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string join_sig12(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ';';
        out += sig12(v[i]);
    }
    return out;
}

std::vector<double> split_doubles(const std::string& s, char sep) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

}  // namespace

SweepRecord make_record(const ChannelParams& params, const SolveResult& result) {
    SweepRecord r;
    r.amplitude = params.amplitude;
    r.dark_current = params.dark_current;
    r.capacity_nats = result.capacity_nats;
    r.capacity_bits = result.capacity_nats / std::log(2.0);
    r.n_points = result.support_size;
    r.duality_gap = result.duality_gap;
    double residual = 0.0;
    for (double d : result.kkt.profile.at_support) {
        residual = std::max(residual, std::abs(d - result.kkt.density_at_zero));
    }
    r.kkt_residual = residual;
    r.eq11_bound = result.support_lower_bound_eq11;
    r.converged = result.converged;
    r.outer_iterations = result.outer_iterations;
    r.points = result.distribution.points;
    r.probs = result.distribution.probs;
    return r;
}

SweepOutcome run_sweep(const SweepSpec& spec) {
    if (spec.grid.empty()) throw std::invalid_argument("sweep grid is empty");
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        if (!(spec.grid[i] >= 0.0)) throw std::invalid_argument("grid values must be >= 0");
        if (i > 0 && !(spec.grid[i] > spec.grid[i - 1])) {
            throw std::invalid_argument("grid must be strictly increasing");
        }
    }
    if (spec.mode == SweepMode::single && spec.grid.size() != 1) {
        throw std::invalid_argument("single mode expects one grid value");
    }
    check_config(spec.solver_config);

    // Up to 8 log-spaced checkpoint indices where a cold start cross-checks the
    // warm-started result.
    std::set<std::size_t> checkpoints;
    const std::size_t n = spec.grid.size();
    for (int j = 0; j < 8; ++j) {
        const double frac = static_cast<double>(j) / 7.0;
        const double idx = std::pow(static_cast<double>(n), frac) - 1.0;
        checkpoints.insert(std::min(n - 1, static_cast<std::size_t>(std::llround(idx))));
    }

    SweepOutcome outcome;
    outcome.cold_start_checkpoints.assign(checkpoints.begin(), checkpoints.end());
    InputDistribution warm;
    bool have_warm = false;
    for (std::size_t i = 0; i < n; ++i) {
        ChannelParams params;
        if (spec.mode == SweepMode::dark_current) {
            params.amplitude = spec.fixed_value;
            params.dark_current = spec.grid[i];
        } else {
            params.amplitude = spec.grid[i];
            params.dark_current = spec.fixed_value;
        }
        const auto start = std::chrono::steady_clock::now();
        SolveResult result = solve(params, spec.solver_config,
                                   have_warm ? &warm : nullptr);
        if (have_warm && checkpoints.count(i) > 0) {
            SolveResult cold = solve(params, spec.solver_config, nullptr);
            const bool prefer_cold =
                (cold.converged && !result.converged) ||
                (cold.converged == result.converged &&
                 cold.capacity_nats > result.capacity_nats);
            if (prefer_cold) result = std::move(cold);
        }
        const auto stop = std::chrono::steady_clock::now();
        outcome.wall_clock_seconds.push_back(
            std::chrono::duration<double>(stop - start).count());
        warm = result.distribution;
        have_warm = true;
        outcome.records.push_back(make_record(params, result));
    }
    return outcome;
}

std::string to_csv(const std::vector<SweepRecord>& records) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : records) {
        out += shortest(r.amplitude) + ',' + shortest(r.dark_current) + ',' +
               shortest(r.capacity_nats) + ',' + shortest(r.capacity_bits) + ',' +
               std::to_string(r.n_points) + ',' + shortest(r.duality_gap) + ',' +
               shortest(r.kkt_residual) + ',' + shortest(r.eq11_bound) + ',' +
               (r.converged ? "true" : "false") + ',' +
               std::to_string(r.outer_iterations) + ',' +
               join_sig12(r.points) + ',' + join_sig12(r.probs) + '\n';
    }
    return out;
}

std::vector<SweepRecord> from_csv(const std::string& text) {
    std::vector<SweepRecord> records;
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line) || line != kCsvHeader) {
        throw std::runtime_error("unexpected CSV header");
    }
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        const auto f = split_fields(line, ',');
        if (f.size() != 12) throw std::runtime_error("malformed CSV row");
        SweepRecord r;
        r.amplitude = std::stod(f[0]);
        r.dark_current = std::stod(f[1]);
        r.capacity_nats = std::stod(f[2]);
        r.capacity_bits = std::stod(f[3]);
        r.n_points = std::stoi(f[4]);
        r.duality_gap = std::stod(f[5]);
        r.kkt_residual = std::stod(f[6]);
        r.eq11_bound = std::stod(f[7]);
        r.converged = f[8] == "true";
        r.outer_iterations = std::stoi(f[9]);
        r.points = split_doubles(f[10], ';');
        r.probs = split_doubles(f[11], ';');
        records.push_back(std::move(r));
    }
    return records;
}

std::string to_json(const std::vector<SweepRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        arr.push_back({{"amplitude", r.amplitude},
                       {"dark_current", r.dark_current},
                       {"capacity_nats", r.capacity_nats},
                       {"capacity_bits", r.capacity_bits},
                       {"n_points", r.n_points},
                       {"duality_gap", r.duality_gap},
                       {"kkt_residual", r.kkt_residual},
                       {"eq11_bound", r.eq11_bound},
                       {"converged", r.converged},
                       {"outer_iterations", r.outer_iterations},
                       {"points", r.points},
                       {"probs", r.probs}});
    }
    return nlohmann::json{{"records", arr}}.dump(2) + "\n";
}

std::vector<SweepRecord> from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    std::vector<SweepRecord> records;
    for (const auto& j : doc.at("records")) {
        SweepRecord r;
        r.amplitude = j.at("amplitude").get<double>();
        r.dark_current = j.at("dark_current").get<double>();
        r.capacity_nats = j.at("capacity_nats").get<double>();
        r.capacity_bits = j.at("capacity_bits").get<double>();
        r.n_points = j.at("n_points").get<int>();
        r.duality_gap = j.at("duality_gap").get<double>();
        r.kkt_residual = j.at("kkt_residual").get<double>();
        r.eq11_bound = j.at("eq11_bound").get<double>();
        r.converged = j.at("converged").get<bool>();
        r.outer_iterations = j.at("outer_iterations").get<int>();
        r.points = j.at("points").get<std::vector<double>>();
        r.probs = j.at("probs").get<std::vector<double>>();
        records.push_back(std::move(r));
    }
    return records;
}

void export_records(const std::vector<SweepRecord>& records,
                    ExportFormat format,
                    const std::string& path) {
    if (records.empty()) throw std::invalid_argument("no records to export");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << (format == ExportFormat::csv ? to_csv(records) : to_json(records));
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace poissoncap
