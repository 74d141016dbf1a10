#include "poissoncap/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace poissoncap {

void check_params(const ChannelParams& params) {
    if (!(params.amplitude >= 0.0) || !std::isfinite(params.amplitude)) {
        throw std::invalid_argument("amplitude must be finite and >= 0");
    }
    if (!(params.dark_current >= 0.0) || !std::isfinite(params.dark_current)) {
        throw std::invalid_argument("dark_current must be finite and >= 0");
    }
}

static void check_input(const ChannelParams& params, double x, int k) {
    if (!(x >= 0.0) || !(x <= params.amplitude)) {
        throw std::domain_error("input x=" + std::to_string(x) +
                                " outside [0, " + std::to_string(params.amplitude) + "]");
    }
    if (k < 0) {
        throw std::domain_error("output symbol k must be >= 0");
    }
    if (x + params.dark_current < 0.0) {
        throw std::domain_error("Poisson mean x + lambda is negative");
    }
}

double log_pmf(const ChannelParams& params, double x, int k) {
    check_input(params, x, k);
    const double mean = x + params.dark_current;
    if (mean == 0.0) {
        return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    return k * std::log(mean) - mean - std::lgamma(k + 1.0);
}

double pmf(const ChannelParams& params, double x, int k) {
    if (k < 0) return 0.0;
    return std::exp(log_pmf(params, x, k));
}

double pmf_derivative(const ChannelParams& params, double x, int k) {
    check_input(params, x, k);
    return pmf(params, x, k - 1) - pmf(params, x, k);
}

OutputTruncation truncation_for(const ChannelParams& params, double tail_mass_bound) {
    check_params(params);
    if (!(tail_mass_bound > 0.0) || !(tail_mass_bound < 1.0)) {
        throw std::invalid_argument("tail_mass_bound must be in (0, 1)");
    }
    const double mean = params.amplitude + params.dark_current;
    if (mean == 0.0) {
        return {0, tail_mass_bound};
    }
    // Kahan-summed cdf; stop once the remaining tail is within the bound.
    double log_term = -mean;
    double sum = std::exp(log_term);
    double comp = 0.0;
    int k = 0;
    while (1.0 - sum > tail_mass_bound) {
        ++k;
        log_term += std::log(mean) - std::log(static_cast<double>(k));
        const double y = std::exp(log_term) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (k > 100'000'000) {
            throw std::runtime_error("truncation search did not terminate");
        }
    }
    return {k, tail_mass_bound};
}

OutputTruncation default_truncation(const ChannelParams& params, double tail_mass_bound) {
    OutputTruncation t = truncation_for(params, tail_mass_bound);
    t.k_max += 10;
    return t;
}

std::vector<double> log_factorial_table(int k_max) {
    std::vector<double> table(static_cast<std::size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) {
        table[static_cast<std::size_t>(k)] = std::lgamma(k + 1.0);
    }
    return table;
}

}  // namespace poissoncap
