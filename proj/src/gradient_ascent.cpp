#include "poissoncap/gradient_ascent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "poissoncap/information.hpp"

namespace poissoncap {

std::vector<double> mi_gradient(const InputDistribution& dist,
                                const ChannelParams& params,
                                const OutputTruncation& trunc) {
    const std::size_t n = dist.points.size();
    const int k_max = trunc.k_max;
    const auto out = induced_output(dist, params, trunc);
    const auto log_fact = log_factorial_table(k_max);
    const double neg_inf = -std::numeric_limits<double>::infinity();

    std::vector<double> grad(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0 || i == n - 1) continue;  // pinned endpoints
        const double mean = dist.points[i] + params.dark_current;
        double acc = 0.0;
        double pmf_prev = 0.0;  // P(-1 | x) = 0
        for (int k = 0; k <= k_max; ++k) {
            double lp;
            if (mean == 0.0) {
                lp = k == 0 ? 0.0 : neg_inf;
            } else {
                lp = k * std::log(mean) - mean - log_fact[static_cast<std::size_t>(k)];
            }
            const double pk = std::exp(lp);
            const double dpk = pmf_prev - pk;
            if (dpk != 0.0 && lp != neg_inf) {
                acc += dpk * (lp - out.log_probs[static_cast<std::size_t>(k)]);
            }
            pmf_prev = pk;
        }
        grad[i] = dist.probs[i] * acc;
    }
    return grad;
}

namespace {

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i - 1] < v[i])) return false;
    }
    return true;
}

}  // namespace

namespace {

// One projected gradient step with an adaptive trial step. The natural step
// scale is ~1/(p_i |i''(x_i)|), typically orders of magnitude above 1, so a
// pure backtracking search from a fixed t would take vanishing steps forever.
// When the first trial is accepted the step is grown while Armijo still holds
// and I keeps improving; the accepted step seeds the next iteration.
InputDistribution ga_step_seeded(const InputDistribution& dist,
                                 const LineSearchConfig& cfg,
                                 const ChannelParams& params,
                                 const OutputTruncation& trunc,
                                 double& seed) {
    const auto grad = mi_gradient(dist, params, trunc);
    double grad_sq = 0.0;
    for (double g : grad) grad_sq += g * g;
    if (grad_sq == 0.0) return dist;

    const double mi0 = mutual_information(dist, params, trunc);
    const auto trial = [&](double t, double& mi_out) {
        InputDistribution cand = dist;
        for (std::size_t i = 0; i < cand.points.size(); ++i) {
            cand.points[i] = std::clamp(dist.points[i] + t * grad[i],
                                        0.0, params.amplitude);
        }
        mi_out = -std::numeric_limits<double>::infinity();
        if (!strictly_increasing(cand.points)) {
            cand.points.clear();  // crossing: reject this t
            return cand;
        }
        mi_out = mutual_information(cand, params, trunc);
        if (mi_out < mi0 + cfg.armijo_coefficient * t * grad_sq) cand.points.clear();
        return cand;
    };

    double step = seed;
    for (int bt = 0; bt <= cfg.max_backtracks; ++bt, step *= cfg.shrink_factor) {
        double mi1;
        InputDistribution cand = trial(step, mi1);
        if (cand.points.empty()) continue;
        if (bt == 0) {
            // Forward-track: the seed was accepted outright, so larger steps
            // may be admissible too.
            for (double t = step / cfg.shrink_factor; t < 1e15;
                 t /= cfg.shrink_factor) {
                double mi2;
                InputDistribution bigger = trial(t, mi2);
                if (bigger.points.empty() || mi2 <= mi1) break;
                cand = std::move(bigger);
                mi1 = mi2;
                step = t;
            }
        }
        seed = step;
        return cand;
    }
    seed = cfg.initial_step;
    return dist;
}

}  // namespace

InputDistribution ga_step(const InputDistribution& dist,
                          const LineSearchConfig& cfg,
                          const ChannelParams& params,
                          const OutputTruncation& trunc) {
    double seed = cfg.initial_step;
    return ga_step_seeded(dist, cfg, params, trunc, seed);
}

InputDistribution ga_run(const InputDistribution& dist,
                         int n_iters,
                         const LineSearchConfig& cfg,
                         const ChannelParams& params,
                         const OutputTruncation& trunc) {
    InputDistribution cur = dist;
    double seed = cfg.initial_step;
    for (int i = 0; i < n_iters; ++i) {
        InputDistribution next = ga_step_seeded(cur, cfg, params, trunc, seed);
        if (next.points == cur.points) break;  // stalled
        cur = std::move(next);
        seed /= cfg.shrink_factor;  // let the next step grow again
    }
    return cur;
}

}  // namespace poissoncap
