#pragma once

#include <vector>

#include "poissoncap/information.hpp"

namespace poissoncap {

// Result of the epsilon-KKT check. The candidate is the argmax of the
// information density over [0, A]; violating_points are the support points
// whose density falls outside the epsilon-strip around i(0; P_X).
struct KktReport {
    bool valid = false;
    double epsilon = 0.0;
    double candidate_x = 0.0;
    double max_density = 0.0;
    double density_at_zero = 0.0;
    bool exterior_violation = false;   // i(0) + eps < max_x i(x)
    bool support_violation = false;    // |i(x_i) - i(0)| > eps for some x_i
    std::vector<double> violating_points;
    InfoDensityProfile profile;
};

KktReport kkt_validate(const InputDistribution& dist,
                       double epsilon,
                       const ChannelParams& params,
                       const OutputTruncation& trunc);

enum class KktUpdateAction {
    inserted,  // candidate added, probabilities reset to uniform
    merged,    // two close violating points replaced by the candidate
    snapped,   // nearby interior point moved onto the candidate, mass kept
    polish,    // no structural change; caller should rerun Blahut-Arimoto
};

struct KktUpdateResult {
    InputDistribution dist;
    KktUpdateAction action = KktUpdateAction::polish;
};

// UPDATE repair rule for an invalid report. If both conditions are violated and
// two violating points within delta bracket the candidate, they are merged into
// it with summed probability; otherwise, on an exterior violation, the candidate
// is inserted and probabilities reset to uniform. A candidate within delta of
// an existing interior point snaps that point onto it instead of inserting; if
// the nearby point is a pinned endpoint, or on a support-only violation, the
// result is the polish action. Throws std::logic_error when called with a
// valid report.
KktUpdateResult kkt_update(const InputDistribution& dist,
                           const KktReport& report,
                           double delta,
                           const ChannelParams& params,
                           double min_spacing);

}  // namespace poissoncap
