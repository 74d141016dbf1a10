#pragma once

#include <optional>
#include <string>
#include <vector>

#include "poissoncap/channel.hpp"

namespace poissoncap {

// Finite-support candidate input distribution. Support points are kept strictly
// increasing in [0, A] with the endpoints 0 and A always present.
struct InputDistribution {
    std::vector<double> points;
    std::vector<double> probs;

    std::size_t size() const { return points.size(); }
};

// Induced output pmf P_Y on {0, ..., k_max}, stored in the log domain.
struct OutputDistribution {
    std::vector<double> log_probs;
};

// Returns std::nullopt when all invariants hold, otherwise a description of the
// first violated one. min_spacing = 0 skips the spacing check.
std::optional<std::string> validate(const InputDistribution& dist,
                                    const ChannelParams& params,
                                    double min_spacing = 0.0);

// log P_Y(k) = log sum_i p_i P(k | x_i), via log-sum-exp.
OutputDistribution induced_output(const InputDistribution& dist,
                                  const ChannelParams& params,
                                  const OutputTruncation& trunc);

// Merges maximal runs of points with consecutive gaps < min_spacing into a
// single point at the probability-weighted mean of the run, carrying the summed
// probability. The endpoints 0 and A never move; a run containing an endpoint
// collapses onto it. Repeated until the spacing invariant holds.
InputDistribution cluster(const InputDistribution& dist,
                          const ChannelParams& params,
                          double min_spacing);

// Drops points with probability below the threshold (endpoints are kept) and
// renormalizes.
InputDistribution prune_small_probs(const InputDistribution& dist,
                                    double threshold = 1e-12);

}  // namespace poissoncap
