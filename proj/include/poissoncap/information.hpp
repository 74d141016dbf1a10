#pragma once

#include <vector>

#include "poissoncap/input_distribution.hpp"

namespace poissoncap {

// Information densities i(x; P_X) evaluated at the support and on a scan grid
// covering [0, A]. peak_x / peak_density come from golden-section refinement
// around the grid argmax.
struct InfoDensityProfile {
    std::vector<double> at_support;
    std::vector<double> grid_x;
    std::vector<double> grid_density;
    double peak_x = 0.0;
    double peak_density = 0.0;
};

// i(x; P_X) = D(P_{Y|X}(.|x) || P_Y) in nats, summed over the truncated output
// alphabet. out must be induced_output(dist) for the same truncation.
double info_density(double x,
                    const OutputDistribution& out,
                    const ChannelParams& params,
                    const OutputTruncation& trunc);

// i(x_i; P_X) for every support point.
std::vector<double> support_densities(const InputDistribution& dist,
                                      const OutputDistribution& out,
                                      const ChannelParams& params,
                                      const OutputTruncation& trunc);

// I(X;Y) = sum_i p_i i(x_i; P_X), in nats.
double mutual_information(const InputDistribution& dist,
                          const ChannelParams& params,
                          const OutputTruncation& trunc);

// Scans i(x; P_X) on a uniform grid with spacing min(1e-3, A/1e4), then refines
// the argmax by golden section to 1e-8 absolute x-tolerance.
InfoDensityProfile scan_profile(const InputDistribution& dist,
                                const ChannelParams& params,
                                const OutputTruncation& trunc);

struct CapacitySandwich {
    double lower = 0.0;  // I(P_X), a capacity lower bound
    double upper = 0.0;  // max_x i(x; P_X), a capacity upper bound
};

CapacitySandwich capacity_sandwich(const InputDistribution& dist,
                                   const InfoDensityProfile& profile);

}  // namespace poissoncap
