#pragma once

#include "poissoncap/input_distribution.hpp"

namespace poissoncap {

// One multiplicative Blahut-Arimoto update at fixed support:
//   p_i <- p_i exp(i(x_i; P_X)) / sum_j p_j exp(i(x_j; P_X)).
// Probabilities below 1e-12 are pruned afterwards (endpoints kept).
InputDistribution ba_step(const InputDistribution& dist,
                          const ChannelParams& params,
                          const OutputTruncation& trunc);

// n_iters Blahut-Arimoto updates, with an early exit once the max probability
// change per step drops below 1e-14.
InputDistribution ba_run(const InputDistribution& dist,
                         int n_iters,
                         const ChannelParams& params,
                         const OutputTruncation& trunc);

}  // namespace poissoncap
