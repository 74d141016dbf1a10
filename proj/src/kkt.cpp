#include "poissoncap/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace poissoncap {

KktReport kkt_validate(const InputDistribution& dist,
                       double epsilon,
                       const ChannelParams& params,
                       const OutputTruncation& trunc) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

    KktReport report;
    report.epsilon = epsilon;
    report.profile = scan_profile(dist, params, trunc);
    report.candidate_x = report.profile.peak_x;
    report.max_density = report.profile.peak_density;
    // The grid starts at x = 0; i(0) anchors the test in place of the unknown C.
    report.density_at_zero = report.profile.grid_density.front();

    report.exterior_violation =
        report.density_at_zero + epsilon < report.max_density;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (std::abs(report.profile.at_support[i] - report.density_at_zero) > epsilon) {
            report.violating_points.push_back(dist.points[i]);
        }
    }
    report.support_violation = !report.violating_points.empty();
    report.valid = !report.exterior_violation && !report.support_violation;
    return report;
}

KktUpdateResult kkt_update(const InputDistribution& dist,
                           const KktReport& report,
                           double delta,
                           const ChannelParams& params,
                           double min_spacing) {
    if (report.valid) {
        throw std::logic_error("kkt_update called with a valid report");
    }
    const double x_hat = report.candidate_x;

    if (report.exterior_violation && report.support_violation) {
        // Merge rule: pick the closest violating pair bracketing the candidate,
        // ties broken by smaller x1. Pairs touching a pinned endpoint are skipped.
        const auto& s = report.violating_points;
        double best_gap = std::numeric_limits<double>::infinity();
        std::size_t best_a = 0, best_b = 0;
        bool found = false;
        for (std::size_t a = 0; a < s.size(); ++a) {
            for (std::size_t b = a + 1; b < s.size(); ++b) {
                const double x1 = std::min(s[a], s[b]);
                const double x2 = std::max(s[a], s[b]);
                if (x1 == 0.0 || x2 == params.amplitude) continue;
                if (x2 - x1 >= delta) continue;
                if (x_hat < x1 || x_hat > x2) continue;
                if (x2 - x1 < best_gap) {
                    best_gap = x2 - x1;
                    best_a = a;
                    best_b = b;
                    found = true;
                }
            }
        }
        if (found) {
            const double x1 = std::min(s[best_a], s[best_b]);
            const double x2 = std::max(s[best_a], s[best_b]);
            InputDistribution out;
            double merged_mass = 0.0;
            for (std::size_t i = 0; i < dist.size(); ++i) {
                if (dist.points[i] == x1 || dist.points[i] == x2) {
                    merged_mass += dist.probs[i];
                } else {
                    out.points.push_back(dist.points[i]);
                    out.probs.push_back(dist.probs[i]);
                }
            }
            const auto pos = std::lower_bound(out.points.begin(), out.points.end(), x_hat);
            const auto idx = static_cast<std::size_t>(pos - out.points.begin());
            out.points.insert(pos, x_hat);
            out.probs.insert(out.probs.begin() + static_cast<std::ptrdiff_t>(idx),
                             merged_mass);
            return {std::move(out), KktUpdateAction::merged};
        }
    }

    if (report.exterior_violation) {
        // A candidate this close to an existing point is a position error, not
        // a missing mass point: inserting would create a near-duplicate that
        // Blahut-Arimoto cannot tell apart from its neighbour. Snap the
        // neighbour onto the candidate instead (endpoints stay pinned).
        std::size_t nearest = 0;
        double nearest_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < dist.size(); ++i) {
            const double gap = std::abs(dist.points[i] - x_hat);
            if (gap < nearest_gap) {
                nearest_gap = gap;
                nearest = i;
            }
        }
        // Points closer than the local Poisson noise scale sqrt(x + lambda)
        // are informationally indistinguishable (optimal spacing grows like
        // ~1.5 sqrt(x + lambda)), so a candidate within a quarter of that
        // scale is a position correction, not a missing mass point.
        const double snap_radius =
            std::max({min_spacing, delta,
                      0.25 * std::sqrt(x_hat + params.dark_current)});
        if (nearest_gap < snap_radius) {
            if (nearest == 0 || nearest + 1 == dist.size()) {
                return {dist, KktUpdateAction::polish};
            }
            InputDistribution out = dist;
            out.points[nearest] = x_hat;
            return {std::move(out), KktUpdateAction::snapped};
        }
        InputDistribution out = dist;
        const auto pos = std::lower_bound(out.points.begin(), out.points.end(), x_hat);
        out.points.insert(pos, x_hat);
        out.probs.assign(out.points.size(), 1.0 / static_cast<double>(out.points.size()));
        return {std::move(out), KktUpdateAction::inserted};
    }

    // Support-strip violation only: the probabilities are unconverged, not the
    // support; signal the caller to run more Blahut-Arimoto.
    return {dist, KktUpdateAction::polish};
}

}  // namespace poissoncap
