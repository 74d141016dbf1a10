#pragma once

#include <vector>

#include "poissoncap/input_distribution.hpp"

namespace poissoncap {

// Armijo backtracking line-search parameters.
struct LineSearchConfig {
    double initial_step = 1.0;
    double shrink_factor = 0.5;
    double armijo_coefficient = 1e-4;
    int max_backtracks = 40;
};

// dI/dx_i = p_i sum_k dP(k|x_i)/dx [log P(k|x_i) - log P_Y(k)].
// Entries for the pinned endpoints 0 and A are forced to zero.
std::vector<double> mi_gradient(const InputDistribution& dist,
                                const ChannelParams& params,
                                const OutputTruncation& trunc);

// One projected gradient step on the support locations (probabilities fixed):
// candidates x + t*g are clamped to [0, A], t found by Armijo backtracking,
// growing while the condition holds since the natural step scale is far above
// 1. Steps that would cross two points are rejected at that t. Returns the
// input unchanged when no improving step is found. ga_run carries the accepted
// step from one iteration to the next.
InputDistribution ga_step(const InputDistribution& dist,
                          const LineSearchConfig& cfg,
                          const ChannelParams& params,
                          const OutputTruncation& trunc);

InputDistribution ga_run(const InputDistribution& dist,
                         int n_iters,
                         const LineSearchConfig& cfg,
                         const ChannelParams& params,
                         const OutputTruncation& trunc);

}  // namespace poissoncap
