#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "poissoncap/blahut_arimoto.hpp"
#include "poissoncap/gradient_ascent.hpp"
#include "poissoncap/information.hpp"

using namespace poissoncap;

namespace {

InputDistribution random_instance(std::mt19937& rng, double* amplitude_out) {
    const double a = std::uniform_real_distribution<>(0.5, 20.0)(rng);
    const int n = std::uniform_int_distribution<>(3, 8)(rng);
    InputDistribution d;
    d.points.push_back(0.0);
    for (int i = 0; i < n - 2; ++i) {
        d.points.push_back(std::uniform_real_distribution<>(0.05 * a, 0.95 * a)(rng));
    }
    d.points.push_back(a);
    std::sort(d.points.begin(), d.points.end());
    for (std::size_t i = 1; i < d.points.size(); ++i) {
        if (d.points[i] - d.points[i - 1] < 1e-3) d.points[i] = d.points[i - 1] + 1e-3;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        d.probs.push_back(std::uniform_real_distribution<>(0.05, 1.0)(rng));
        total += d.probs.back();
    }
    for (auto& p : d.probs) p /= total;
    *amplitude_out = d.points.back();
    return d;
}

double fd_gradient(const InputDistribution& d, std::size_t i,
                   const ChannelParams& params, const OutputTruncation& trunc,
                   double h) {
    InputDistribution plus = d, minus = d;
    plus.points[i] += h;
    minus.points[i] -= h;
    return (mutual_information(plus, params, trunc) -
            mutual_information(minus, params, trunc)) /
           (2.0 * h);
}

}  // namespace

TEST_CASE("gradient matches central finite differences") {
    std::mt19937 rng(123);
    const double h = 1e-5;
    for (int trial = 0; trial < 30; ++trial) {
        double a = 0.0;
        const auto d = random_instance(rng, &a);
        ChannelParams params{a, std::vector<double>{0.0, 1.0, 10.0}[
            static_cast<std::size_t>(std::uniform_int_distribution<>(0, 2)(rng))]};
        const auto trunc = default_truncation(params);
        const auto grad = mi_gradient(d, params, trunc);
        for (std::size_t i = 1; i + 1 < d.size(); ++i) {
            if (d.points[i] < h || d.points[i] > a - h) continue;
            const double fd = fd_gradient(d, i, params, trunc, h);
            CHECK(std::abs(grad[i] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("single interior point holding all but endpoint mass") {
    ChannelParams params{6.0, 0.0};
    const auto trunc = default_truncation(params);
    const InputDistribution d{{0.0, 2.7, 6.0}, {0.001, 0.998, 0.001}};
    const auto grad = mi_gradient(d, params, trunc);
    const double fd = fd_gradient(d, 1, params, trunc, 1e-5);
    CHECK(std::abs(grad[1] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
}

TEST_CASE("pinned endpoints get zero gradient entries") {
    ChannelParams params{4.0, 1.0};
    const auto trunc = default_truncation(params);
    const auto grad =
        mi_gradient({{0.0, 1.0, 4.0}, {0.3, 0.4, 0.3}}, params, trunc);
    CHECK(grad.front() == 0.0);
    CHECK(grad.back() == 0.0);
    CHECK(grad[1] != 0.0);
}

TEST_CASE("ga_step on a binary support is the identity") {
    ChannelParams params{3.0, 0.0};
    const auto trunc = default_truncation(params);
    const InputDistribution d{{0.0, 3.0}, {0.5, 0.5}};
    const auto next = ga_step(d, LineSearchConfig{}, params, trunc);
    CHECK(next.points == d.points);
    CHECK(next.probs == d.probs);
}

TEST_CASE("ga never decreases mutual information and stays feasible") {
    std::mt19937 rng(321);
    LineSearchConfig cfg;
    for (int trial = 0; trial < 10; ++trial) {
        double a = 0.0;
        auto d = random_instance(rng, &a);
        ChannelParams params{a, 0.0};
        const auto trunc = default_truncation(params);
        double mi = mutual_information(d, params, trunc);
        for (int it = 0; it < 8; ++it) {
            d = ga_step(d, cfg, params, trunc);
            const double next_mi = mutual_information(d, params, trunc);
            CHECK(next_mi >= mi - 1e-13);
            mi = next_mi;
            for (std::size_t i = 0; i < d.points.size(); ++i) {
                CHECK(d.points[i] >= 0.0);
                CHECK(d.points[i] <= a);
                if (i > 0) CHECK(d.points[i] > d.points[i - 1]);
            }
        }
    }
}

TEST_CASE("ga_run(1) equals ga_step") {
    ChannelParams params{5.0, 0.0};
    const auto trunc = default_truncation(params);
    const InputDistribution d{{0.0, 1.3, 3.9, 5.0}, {0.25, 0.25, 0.25, 0.25}};
    LineSearchConfig cfg;
    const auto a = ga_run(d, 1, cfg, params, trunc);
    const auto b = ga_step(d, cfg, params, trunc);
    CHECK(a.points == b.points);
}

TEST_CASE("perturbed interior point returns to the stationary location") {
    ChannelParams params{5.0, 0.0};
    const auto trunc = default_truncation(params);
    LineSearchConfig cfg;

    // Alternate BA and GA to a joint stationary point, then perturb the interior
    // point both ways; both runs must come back to the same place.
    InputDistribution base{{0.0, 2.0, 5.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
    for (int it = 0; it < 60; ++it) {
        base = ba_run(base, 100, params, trunc);
        base = ga_run(base, 20, cfg, params, trunc);
    }
    REQUIRE(base.size() == 3);

    auto settle = [&](double shift) {
        InputDistribution d = base;
        d.points[1] += shift;
        for (int it = 0; it < 60; ++it) d = ga_run(d, 20, cfg, params, trunc);
        return d.points[1];
    };
    const double up = settle(0.05);
    const double down = settle(-0.05);
    CHECK(std::abs(up - down) <= 1e-4);
    CHECK(std::abs(up - base.points[1]) <= 1e-4);

    const auto grad = mi_gradient(base, params, trunc);
    CHECK(std::abs(grad[1]) <= 1e-6);
}
