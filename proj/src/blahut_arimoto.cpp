#include "poissoncap/blahut_arimoto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace poissoncap {

namespace {

constexpr double kPruneThreshold = 1e-12;
constexpr double kFixedPointTol = 1e-14;

}  // namespace

InputDistribution ba_run(const InputDistribution& dist,
                         int n_iters,
                         const ChannelParams& params,
                         const OutputTruncation& trunc) {
    const std::size_t n = dist.points.size();
    const int k_max = trunc.k_max;
    const double neg_inf = -std::numeric_limits<double>::infinity();
    const auto log_fact = log_factorial_table(k_max);

    // Fixed support: the channel rows log P(k | x_i) do not change across steps.
    std::vector<std::vector<double>> log_rows(n);
    std::vector<std::vector<double>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double mean = dist.points[i] + params.dark_current;
        log_rows[i].resize(static_cast<std::size_t>(k_max) + 1);
        rows[i].resize(static_cast<std::size_t>(k_max) + 1);
        for (int k = 0; k <= k_max; ++k) {
            double lp;
            if (mean == 0.0) {
                lp = k == 0 ? 0.0 : neg_inf;
            } else {
                lp = k * std::log(mean) - mean - log_fact[static_cast<std::size_t>(k)];
            }
            log_rows[i][static_cast<std::size_t>(k)] = lp;
            rows[i][static_cast<std::size_t>(k)] = std::exp(lp);
        }
    }

    std::vector<double> p = dist.probs;
    std::vector<double> log_q(static_cast<std::size_t>(k_max) + 1);
    std::vector<double> density(n);

    std::vector<double> log_p(n);

    for (int iter = 0; iter < n_iters; ++iter) {
        for (std::size_t i = 0; i < n; ++i) log_p[i] = std::log(p[i]);

        // log P_Y(k) via log-sum-exp over the support.
        for (int k = 0; k <= k_max; ++k) {
            double max_term = neg_inf;
            for (std::size_t i = 0; i < n; ++i) {
                const double t = log_rows[i][static_cast<std::size_t>(k)];
                if (t != neg_inf) max_term = std::max(max_term, log_p[i] + t);
            }
            if (max_term == neg_inf) {
                log_q[static_cast<std::size_t>(k)] = neg_inf;
                continue;
            }
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double t = log_rows[i][static_cast<std::size_t>(k)];
                if (t != neg_inf) sum += std::exp(log_p[i] + t - max_term);
            }
            log_q[static_cast<std::size_t>(k)] = max_term + std::log(sum);
        }

        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int k = 0; k <= k_max; ++k) {
                const double w = rows[i][static_cast<std::size_t>(k)];
                if (w > 0.0) {
                    acc += w * (log_rows[i][static_cast<std::size_t>(k)] -
                                log_q[static_cast<std::size_t>(k)]);
                }
            }
            density[i] = acc;
        }

        // Shift by the max density before exponentiating; i can reach several nats.
        const double d_max = *std::max_element(density.begin(), density.end());
        double norm = 0.0;
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = p[i] * std::exp(density[i] - d_max);
            norm += next[i];
        }
        double max_change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] /= norm;
            max_change = std::max(max_change, std::abs(next[i] - p[i]));
        }
        p = std::move(next);
        if (max_change < kFixedPointTol) break;
    }

    InputDistribution result{dist.points, std::move(p)};
    return prune_small_probs(result, kPruneThreshold);
}

InputDistribution ba_step(const InputDistribution& dist,
                          const ChannelParams& params,
                          const OutputTruncation& trunc) {
    return ba_run(dist, 1, params, trunc);
}

}  // namespace poissoncap
