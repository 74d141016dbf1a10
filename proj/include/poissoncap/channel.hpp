#pragma once

#include <vector>

namespace poissoncap {

// Discrete-time Poisson channel instance: Y | X=x ~ Poisson(x + dark_current),
// input constrained to [0, amplitude].
struct ChannelParams {
    double amplitude = 0.0;
    double dark_current = 0.0;
};

// Throws std::invalid_argument if amplitude or dark_current is negative or non-finite.
void check_params(const ChannelParams& params);

// Finite output alphabet {0, ..., k_max}. The retained mass satisfies
// sum_{k <= k_max} P(k | x) >= 1 - tail_mass_bound for every x in [0, A]
// (checked at x = A, where the Poisson mean is largest).
struct OutputTruncation {
    int k_max = 0;
    double tail_mass_bound = 1e-12;
};

// log P(k | x) = k*ln(x+lambda) - (x+lambda) - ln(k!), in nats.
// At x+lambda = 0 the output is a point mass at k = 0 (conventions 0^0 = 1, 0! = 1):
// returns 0 for k = 0 and -infinity for k > 0.
// Throws std::domain_error if x is outside [0, A] or k < 0.
double log_pmf(const ChannelParams& params, double x, int k);

// exp(log_pmf); returns 0 for k < 0.
double pmf(const ChannelParams& params, double x, int k);

// d/dx P(k | x) = P(k-1 | x) - P(k | x), with P(-1 | x) = 0.
double pmf_derivative(const ChannelParams& params, double x, int k);

// Smallest K such that the Poisson(A + lambda) tail beyond K is <= tail_mass_bound.
// Throws std::invalid_argument unless 0 < tail_mass_bound < 1.
OutputTruncation truncation_for(const ChannelParams& params, double tail_mass_bound);

// truncation_for plus a safety margin of 10 extra symbols; the solver default.
OutputTruncation default_truncation(const ChannelParams& params,
                                    double tail_mass_bound = 1e-12);

// lgamma(k+1) for k = 0..k_max; shared by the hot loops.
std::vector<double> log_factorial_table(int k_max);

}  // namespace poissoncap
