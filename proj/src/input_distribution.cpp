#include "poissoncap/input_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace poissoncap {

std::optional<std::string> validate(const InputDistribution& dist,
                                    const ChannelParams& params,
                                    double min_spacing) {
    const std::size_t n = dist.points.size();
    if (n == 0) return "empty support";
    if (dist.probs.size() != n) return "points and probs lengths differ";
    for (std::size_t i = 0; i < n; ++i) {
        const double x = dist.points[i];
        if (!std::isfinite(x) || x < 0.0 || x > params.amplitude) {
            std::ostringstream oss;
            oss << "point " << x << " outside [0, " << params.amplitude << "]";
            return oss.str();
        }
        if (i > 0 && !(dist.points[i - 1] < x)) {
            return "points not strictly increasing";
        }
        if (!(dist.probs[i] > 0.0)) {
            std::ostringstream oss;
            oss << "probability " << dist.probs[i] << " at point " << x << " not positive";
            return oss.str();
        }
    }
    const double total = std::accumulate(dist.probs.begin(), dist.probs.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream oss;
        oss << "probabilities sum to " << total;
        return oss.str();
    }
    if (dist.points.front() != 0.0) return "endpoint 0 missing";
    if (dist.points.back() != params.amplitude) return "endpoint A missing";
    if (min_spacing > 0.0) {
        for (std::size_t i = 1; i < n; ++i) {
            if (dist.points[i] - dist.points[i - 1] < min_spacing) {
                return "support spacing below minimum";
            }
        }
    }
    return std::nullopt;
}

OutputDistribution induced_output(const InputDistribution& dist,
                                  const ChannelParams& params,
                                  const OutputTruncation& trunc) {
    const std::size_t n = dist.points.size();
    const int k_max = trunc.k_max;
    const auto log_fact = log_factorial_table(k_max);
    const double neg_inf = -std::numeric_limits<double>::infinity();

    std::vector<double> log_p(n), log_mean(n), mean(n);
    for (std::size_t i = 0; i < n; ++i) {
        log_p[i] = std::log(dist.probs[i]);
        mean[i] = dist.points[i] + params.dark_current;
        log_mean[i] = mean[i] > 0.0 ? std::log(mean[i]) : neg_inf;
    }

    OutputDistribution out;
    out.log_probs.assign(static_cast<std::size_t>(k_max) + 1, neg_inf);
    std::vector<double> terms(n);
    for (int k = 0; k <= k_max; ++k) {
        double max_term = neg_inf;
        for (std::size_t i = 0; i < n; ++i) {
            double lp;
            if (mean[i] == 0.0) {
                lp = k == 0 ? 0.0 : neg_inf;
            } else {
                lp = k * log_mean[i] - mean[i] - log_fact[static_cast<std::size_t>(k)];
            }
            terms[i] = log_p[i] + lp;
            max_term = std::max(max_term, terms[i]);
        }
        if (max_term == neg_inf) continue;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (terms[i] != neg_inf) sum += std::exp(terms[i] - max_term);
        }
        out.log_probs[static_cast<std::size_t>(k)] = max_term + std::log(sum);
    }
    return out;
}

namespace {

// One merge pass. Endpoints act as anchors: a run containing one collapses onto
// it. A run containing both endpoints only occurs for A < min_spacing; its mass
// is split onto the endpoints by proximity.
InputDistribution cluster_pass(const InputDistribution& dist,
                               const ChannelParams& params,
                               double min_spacing,
                               bool* changed) {
    const std::size_t n = dist.points.size();
    *changed = false;
    if (n <= 1) return dist;

    InputDistribution out;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && dist.points[j + 1] - dist.points[j] < min_spacing) ++j;
        if (j == i) {
            out.points.push_back(dist.points[i]);
            out.probs.push_back(dist.probs[i]);
            i = j + 1;
            continue;
        }
        *changed = true;
        const bool has_zero = (i == 0);
        const bool has_a = (j == n - 1);
        if (has_zero && has_a) {
            double p0 = 0.0, pa = 0.0;
            for (std::size_t t = i; t <= j; ++t) {
                if (dist.points[t] <= params.amplitude / 2.0) p0 += dist.probs[t];
                else pa += dist.probs[t];
            }
            out.points.push_back(0.0);
            out.probs.push_back(p0);
            if (params.amplitude > 0.0 && pa > 0.0) {
                out.points.push_back(params.amplitude);
                out.probs.push_back(pa);
            }
        } else {
            double mass = 0.0, moment = 0.0;
            for (std::size_t t = i; t <= j; ++t) {
                mass += dist.probs[t];
                moment += dist.probs[t] * dist.points[t];
            }
            double loc;
            if (has_zero) loc = 0.0;
            else if (has_a) loc = params.amplitude;
            else loc = moment / mass;
            out.points.push_back(loc);
            out.probs.push_back(mass);
        }
        i = j + 1;
    }
    return out;
}

}  // namespace

InputDistribution cluster(const InputDistribution& dist,
                          const ChannelParams& params,
                          double min_spacing) {
    InputDistribution cur = dist;
    bool changed = true;
    while (changed) {
        cur = cluster_pass(cur, params, min_spacing, &changed);
    }
    return cur;
}

InputDistribution prune_small_probs(const InputDistribution& dist, double threshold) {
    const std::size_t n = dist.points.size();
    InputDistribution out;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool endpoint = (i == 0 || i == n - 1);
        if (endpoint || dist.probs[i] >= threshold) {
            out.points.push_back(dist.points[i]);
            out.probs.push_back(dist.probs[i]);
            total += dist.probs[i];
        }
    }
    for (auto& p : out.probs) p /= total;
    return out;
}

}  // namespace poissoncap
