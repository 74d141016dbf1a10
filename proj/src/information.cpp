#include "poissoncap/information.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace poissoncap {

namespace {

constexpr double kNegligibleLogPmf = -60.0;

// KL sum with the log-factorial table hoisted out; terms past the Poisson mode
// with log-pmf below kNegligibleLogPmf contribute < 1e-23 each and are skipped.
double density_kernel(double x,
                      const OutputDistribution& out,
                      const ChannelParams& params,
                      const std::vector<double>& log_fact) {
    const double mean = x + params.dark_current;
    const int k_max = static_cast<int>(out.log_probs.size()) - 1;
    if (mean == 0.0) {
        return -out.log_probs[0];
    }
    const double log_mean = std::log(mean);
    double acc = 0.0;
    for (int k = 0; k <= k_max; ++k) {
        const double lp = k * log_mean - mean - log_fact[static_cast<std::size_t>(k)];
        if (lp < kNegligibleLogPmf) {
            if (k > mean) break;
            continue;
        }
        acc += std::exp(lp) * (lp - out.log_probs[static_cast<std::size_t>(k)]);
    }
    return acc;
}

double golden_section_max(const std::function<double(double)>& f,
                          double a, double b, double x_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > x_tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double info_density(double x,
                    const OutputDistribution& out,
                    const ChannelParams& params,
                    const OutputTruncation& trunc) {
    if (!(x >= 0.0) || !(x <= params.amplitude)) {
        throw std::domain_error("info_density: x outside [0, A]");
    }
    const auto log_fact = log_factorial_table(trunc.k_max);
    return density_kernel(x, out, params, log_fact);
}

std::vector<double> support_densities(const InputDistribution& dist,
                                      const OutputDistribution& out,
                                      const ChannelParams& params,
                                      const OutputTruncation& trunc) {
    const auto log_fact = log_factorial_table(trunc.k_max);
    std::vector<double> densities(dist.points.size());
    for (std::size_t i = 0; i < dist.points.size(); ++i) {
        densities[i] = density_kernel(dist.points[i], out, params, log_fact);
    }
    return densities;
}

double mutual_information(const InputDistribution& dist,
                          const ChannelParams& params,
                          const OutputTruncation& trunc) {
    const auto out = induced_output(dist, params, trunc);
    const auto densities = support_densities(dist, out, params, trunc);
    double mi = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        mi += dist.probs[i] * densities[i];
    }
    return mi;
}

InfoDensityProfile scan_profile(const InputDistribution& dist,
                                const ChannelParams& params,
                                const OutputTruncation& trunc) {
    const auto out = induced_output(dist, params, trunc);
    const auto log_fact = log_factorial_table(trunc.k_max);
    const double a = params.amplitude;

    InfoDensityProfile profile;
    profile.at_support.resize(dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i) {
        profile.at_support[i] = density_kernel(dist.points[i], out, params, log_fact);
    }

    if (a == 0.0) {
        profile.grid_x = {0.0};
        profile.grid_density = {profile.at_support.front()};
        profile.peak_x = 0.0;
        profile.peak_density = profile.grid_density[0];
        return profile;
    }

    const double spacing = std::min(1e-3, a / 1e4);
    const std::size_t m = static_cast<std::size_t>(std::ceil(a / spacing)) + 1;
    profile.grid_x.resize(m);
    profile.grid_density.resize(m);
    std::size_t argmax = 0;
    for (std::size_t j = 0; j < m; ++j) {
        const double x = std::min(a, j * spacing);
        profile.grid_x[j] = x;
        profile.grid_density[j] = density_kernel(x, out, params, log_fact);
        if (profile.grid_density[j] > profile.grid_density[argmax]) argmax = j;
    }
    profile.grid_x.back() = a;

    const double lo = profile.grid_x[argmax > 0 ? argmax - 1 : 0];
    const double hi = profile.grid_x[std::min(argmax + 1, m - 1)];
    const auto f = [&](double x) { return density_kernel(x, out, params, log_fact); };
    const double x_star = golden_section_max(f, lo, hi, 1e-8);
    const double f_star = f(x_star);
    if (f_star >= profile.grid_density[argmax]) {
        profile.peak_x = x_star;
        profile.peak_density = f_star;
    } else {
        profile.peak_x = profile.grid_x[argmax];
        profile.peak_density = profile.grid_density[argmax];
    }
    return profile;
}

CapacitySandwich capacity_sandwich(const InputDistribution& dist,
                                   const InfoDensityProfile& profile) {
    CapacitySandwich s;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        s.lower += dist.probs[i] * profile.at_support[i];
    }
    s.upper = std::max(profile.peak_density, s.lower);
    return s;
}

}  // namespace poissoncap
