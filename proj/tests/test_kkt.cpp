#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "poissoncap/blahut_arimoto.hpp"
#include "poissoncap/kkt.hpp"

using namespace poissoncap;

TEST_CASE("converged binary optimum at A = 3 validates") {
    ChannelParams params{3.0, 0.0};
    const auto trunc = default_truncation(params);
    const auto d = ba_run({{0.0, 3.0}, {0.5, 0.5}}, 20000, params, trunc);
    const auto report = kkt_validate(d, 1e-6, params, trunc);
    CHECK(report.valid);
    CHECK(!report.exterior_violation);
    CHECK(!report.support_violation);
    CHECK(std::abs(report.max_density - report.density_at_zero) <= 1e-6);
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(std::abs(report.profile.at_support[i] - report.density_at_zero) <= 1e-6);
    }
}

TEST_CASE("binary support at A = 4 fails with an interior candidate") {
    // Above the binary-optimality threshold, two points cannot be optimal.
    ChannelParams params{4.0, 0.0};
    const auto trunc = default_truncation(params);
    const auto d = ba_run({{0.0, 4.0}, {0.5, 0.5}}, 20000, params, trunc);
    const auto report = kkt_validate(d, 1e-6, params, trunc);
    CHECK(!report.valid);
    CHECK(report.exterior_violation);
    CHECK(report.candidate_x > 0.0);
    CHECK(report.candidate_x < 4.0);
    CHECK(report.max_density > report.density_at_zero + 1e-6);
}

TEST_CASE("deterministic input is never optimal for A > 0") {
    ChannelParams params{2.0, 0.0};
    const auto trunc = default_truncation(params);
    const auto report = kkt_validate({{0.0}, {1.0}}, 1e-6, params, trunc);
    CHECK(!report.valid);
    CHECK(report.exterior_violation);
    CHECK(report.density_at_zero == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("kkt_validate is deterministic") {
    ChannelParams params{4.0, 1.0};
    const auto trunc = default_truncation(params);
    const InputDistribution d{{0.0, 1.8, 4.0}, {0.4, 0.25, 0.35}};
    const auto a = kkt_validate(d, 1e-6, params, trunc);
    const auto b = kkt_validate(d, 1e-6, params, trunc);
    CHECK(a.valid == b.valid);
    CHECK(a.candidate_x == b.candidate_x);
    CHECK(a.max_density == b.max_density);
    CHECK(a.violating_points == b.violating_points);
}

TEST_CASE("update insert rule grows the support by one, probabilities uniform") {
    ChannelParams params{4.0, 0.0};
    const auto trunc = default_truncation(params);
    const auto d = ba_run({{0.0, 4.0}, {0.5, 0.5}}, 20000, params, trunc);
    auto report = kkt_validate(d, 1e-6, params, trunc);
    REQUIRE(!report.valid);

    const auto upd = kkt_update(d, report, 0.1, params, 1e-2);
    CHECK(upd.action == KktUpdateAction::inserted);
    REQUIRE(upd.dist.size() == 3);
    CHECK(upd.dist.points[1] == report.candidate_x);
    for (double p : upd.dist.probs) CHECK(p == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("update merge rule replaces a close violating pair by the candidate") {
    ChannelParams params{5.0, 0.0};
    const InputDistribution d{{0.0, 1.62, 1.68, 5.0}, {0.3, 0.2, 0.2, 0.3}};
    KktReport report;
    report.valid = false;
    report.epsilon = 1e-6;
    report.exterior_violation = true;
    report.support_violation = true;
    report.candidate_x = 1.65;
    report.violating_points = {1.62, 1.68};

    const auto upd = kkt_update(d, report, 0.1, params, 1e-2);
    CHECK(upd.action == KktUpdateAction::merged);
    REQUIRE(upd.dist.size() == 3);
    CHECK(upd.dist.points[1] == doctest::Approx(1.65));
    CHECK(upd.dist.probs[1] == doctest::Approx(0.4));
    CHECK(upd.dist.probs[0] == doctest::Approx(0.3));
}

TEST_CASE("support-only violation yields the polish action") {
    ChannelParams params{5.0, 0.0};
    const InputDistribution d{{0.0, 2.0, 5.0}, {0.3, 0.4, 0.3}};
    KktReport report;
    report.valid = false;
    report.support_violation = true;
    report.violating_points = {2.0};
    const auto upd = kkt_update(d, report, 0.1, params, 1e-2);
    CHECK(upd.action == KktUpdateAction::polish);
    CHECK(upd.dist.points == d.points);
}

TEST_CASE("candidate near an interior point snaps that point onto it") {
    ChannelParams params{5.0, 0.0};
    const InputDistribution d{{0.0, 2.0, 5.0}, {0.3, 0.4, 0.3}};
    KktReport report;
    report.valid = false;
    report.exterior_violation = true;
    report.candidate_x = 2.04;
    const auto upd = kkt_update(d, report, 0.1, params, 1e-2);
    CHECK(upd.action == KktUpdateAction::snapped);
    REQUIRE(upd.dist.size() == 3);
    CHECK(upd.dist.points[1] == 2.04);
    CHECK(upd.dist.probs == d.probs);
}

TEST_CASE("candidate near a pinned endpoint yields polish") {
    ChannelParams params{5.0, 0.0};
    const InputDistribution d{{0.0, 2.0, 5.0}, {0.3, 0.4, 0.3}};
    KktReport report;
    report.valid = false;
    report.exterior_violation = true;
    report.candidate_x = 4.95;
    const auto upd = kkt_update(d, report, 0.1, params, 1e-2);
    CHECK(upd.action == KktUpdateAction::polish);
    CHECK(upd.dist.points == d.points);
}

TEST_CASE("update with a valid report is a contract violation") {
    ChannelParams params{5.0, 0.0};
    const InputDistribution d{{0.0, 5.0}, {0.5, 0.5}};
    KktReport report;
    report.valid = true;
    CHECK_THROWS_AS(kkt_update(d, report, 0.1, params, 1e-2), std::logic_error);
}
