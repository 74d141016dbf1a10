#pragma once

#include <optional>

#include "poissoncap/blahut_arimoto.hpp"
#include "poissoncap/gradient_ascent.hpp"
#include "poissoncap/kkt.hpp"

namespace poissoncap {

struct SolverConfig {
    double epsilon = 1e-6;
    int n_ba = 100;
    int n_ga = 20;
    int inner_loop_count = 100;
    int max_outer_iterations = 200;
    double min_spacing = 1e-2;
    double delta = 0.1;  // merge-rule distance in the UPDATE step
    LineSearchConfig line_search;
    double tail_mass_bound = 1e-12;
};

void check_config(const SolverConfig& cfg);  // throws std::invalid_argument

struct SolveResult {
    InputDistribution distribution;
    double capacity_nats = 0.0;
    double duality_gap = 0.0;
    KktReport kkt;
    int support_size = 0;
    double support_lower_bound_eq11 = 0.0;  // e^I
    double support_upper_bound_eq4 = 0.0;   // A ln^2 A for A > 1
    int outer_iterations = 0;
    bool converged = false;
};

// Initial support: a warm start (typically the previous sweep point) has its
// points rescaled affinely onto [0, A]; otherwise max(2, ceil(2 sqrt(A)))
// equispaced points with uniform probabilities.
InputDistribution initial_support(const ChannelParams& params,
                                  const InputDistribution* warm_start = nullptr);

// Full capacity solve: repeat { inner loop of [BA; GA] passes; cluster;
// KKT-validate; UPDATE on failure } until valid or max_outer_iterations.
// Non-convergence is reported via converged = false with the best state found.
SolveResult solve(const ChannelParams& params,
                  const SolverConfig& cfg,
                  const InputDistribution* warm_start = nullptr);

struct SupportBoundsDiagnostics {
    double eq11_bound = 0.0;      // e^{capacity}; a hard lower bound on |supp|
    double eq4_bound = 0.0;       // A ln^2 A upper-bound order
    double eq12_heuristic = 0.0;  // c1 sqrt(A) exp(-c2 sqrt(lambda/A)); diagnostic only
    bool hard_bound_violated = false;
};

SupportBoundsDiagnostics support_bounds(const SolveResult& result,
                                        const ChannelParams& params,
                                        double c1 = 1.0,
                                        double c2 = 1.0);

}  // namespace poissoncap
