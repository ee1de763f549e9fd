#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "plh/exponents.hpp"

using namespace plh;
using doctest::Approx;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an exception");
    return ErrorKind::DomainError;
}

} // namespace

TEST_CASE("lambda_of_alpha closed forms") {
    CHECK(lambda_of_alpha(Params(3, 5), 0.0) == 0.0);
    CHECK(lambda_of_alpha(Params(2, 3), -0.75) == Approx(3.0 / 16.0).epsilon(1e-15));
    for (auto [p, n] : {std::pair{3.0, 5}, {2.0, 3}, {4.0, 3}, {2.5, 7}, {6.0, 2}}) {
        const Params P(p, n);
        CHECK(lambda_of_alpha(P, P.critical_alpha()) == Approx(std::pow(std::fabs((p - n) / p), p)).epsilon(1e-14));
    }
}

TEST_CASE("lambda_of_alpha is unimodal around (p-N)/p") {
    for (auto [p, n] : {std::pair{3.0, 5}, {2.0, 3}, {4.0, 3}, {2.5, 7}}) {
        const Params P(p, n);
        const double a = P.critical_alpha();
        for (int i = 1; i < 200; ++i) {
            const double x = a - 3.0 + 3.0 * i / 200.0, y = a + 3.0 * i / 200.0;
            CHECK(lambda_of_alpha(P, x) > lambda_of_alpha(P, x - 0.015));
            CHECK(lambda_of_alpha(P, y) < lambda_of_alpha(P, y - 0.015));
        }
    }
}

TEST_CASE("c_star branches") {
    CHECK(c_star(Params(2, 3)) == Approx(0.25).epsilon(1e-15));
    CHECK(c_star(Params(3, 3)) == Approx(8.0 / 27.0).epsilon(1e-15));
    CHECK(c_star(Params(2, 2)) == Approx(0.25).epsilon(1e-15));
    CHECK(hardy_constants(Params(3, 3)).m_star == 3);
    CHECK(hardy_constants(Params(3, 5)).m_star == 2);
    CHECK(critical_hardy(Params(4, 4)) == 0.0);
}

TEST_CASE("hardy_roots endpoints and examples") {
    const Params P(3, 5);
    const auto zero = hardy_roots(P, 0.0);
    CHECK(zero.lower == Approx(P.extreme_alpha()).epsilon(1e-14));
    CHECK(zero.upper == 0.0);
    CHECK_FALSE(zero.degenerate);

    const auto crit = hardy_roots(P, critical_hardy(P));
    CHECK(crit.degenerate);
    CHECK(crit.lower == Approx(P.critical_alpha()).epsilon(1e-12));
    CHECK(crit.upper == Approx(P.critical_alpha()).epsilon(1e-12));

    const auto q = hardy_roots(Params(2, 3), 3.0 / 16.0);
    CHECK(q.lower == Approx(-0.75).epsilon(1e-14));
    CHECK(q.upper == Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("hardy_roots gates") {
    const Params P(2, 3);
    CHECK(kind_of([&] { hardy_roots(P, 0.26); }) == ErrorKind::DomainError);
    CHECK(kind_of([&] { hardy_roots(P, -1e-3); }) == ErrorKind::DomainError);
    CHECK(kind_of([&] { hardy_roots(Params(3, 3), 0.1); }) == ErrorKind::DegenerateDimension);
    // Within the clamp slack above C_H the double root is returned.
    CHECK(hardy_roots(P, 0.25 * (1.0 + 1e-13)).degenerate);
}

TEST_CASE("roots move toward each other as lambda grows") {
    for (auto [p, n] : {std::pair{3.0, 5}, {4.0, 3}, {2.5, 2}}) {
        const Params P(p, n);
        double lo = -1e300, hi = 1e300;
        for (int i = 0; i <= 50; ++i) {
            const auto r = hardy_roots(P, critical_hardy(P) * i / 50.0);
            CHECK(r.lower >= lo);
            CHECK(r.upper <= hi);
            lo = r.lower;
            hi = r.upper;
        }
    }
}

TEST_CASE("p = 2 roots agree with the quadratic formula") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 3; n <= 10; ++n) {
        const Params P(2, n);
        for (int i = 0; i < 25; ++i) {
            const double lam = u(rng) * critical_hardy(P);
            const double b = n - 2.0, disc = std::sqrt(b * b - 4.0 * lam);
            const double big = -(b + disc) / 2.0;
            const auto r = hardy_roots(P, lam);
            CHECK(std::fabs(r.lower - big) <= 1e-12 * std::max(1.0, std::fabs(big)));
            CHECK(std::fabs(r.upper - lam / big) <= 1e-12 * std::max(1.0, std::fabs(lam / big)));
        }
    }
}

TEST_CASE("200 random roots return their strength") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double p = 2.0 + 4.0 * u(rng);
        const int n = 2 + static_cast<int>(9 * u(rng));
        if (p == n) continue;
        const Params P(p, n);
        const double lam = u(rng) * critical_hardy(P);
        const auto h = hardy_roots(P, lam);
        CHECK(hardy_residual(P, h.lower, lam) <= 1e-12);
        CHECK(hardy_residual(P, h.upper, lam) <= 1e-12);
        const double eps = u(rng) * c_star(P);
        const auto b = improved_roots(P, eps);
        CHECK(improved_residual(P, b.lower, eps) <= 1e-12);
        CHECK(improved_residual(P, b.upper, eps) <= 1e-12);
    }
}

TEST_CASE("improved_roots endpoints") {
    const Params P(3, 5);
    const auto z = improved_roots(P, 0.0);
    CHECK(z.lower == 0.0);
    CHECK(z.upper == Approx(2.0 / 3.0).epsilon(1e-14));
    const auto c = improved_roots(P, c_star(P));
    CHECK(c.degenerate);
    CHECK(c.lower == Approx(1.0 / 3.0).epsilon(1e-10));
    const auto n = improved_roots(Params(3, 3), 0.0);
    CHECK(n.lower == 0.0);
    CHECK(n.upper == Approx(1.0).epsilon(1e-14));
    CHECK(kind_of([&] { improved_roots(P, 1.01 * c_star(P)); }) == ErrorKind::DomainError);
}

TEST_CASE("rescaled map") {
    const Params P(2, 3);
    CHECK(mu_of_beta(P, 0.0) == 0.0);
    CHECK(mu_of_beta(P, 1.0) == 0.0);
    const auto r = rescaled_roots(P, 3.0 / 16.0);
    CHECK(P.extreme_alpha() * r.upper == Approx(-0.75).epsilon(1e-12));
    for (auto [p, n] : {std::pair{3.0, 5}, {4.0, 3}}) {
        const Params Q(p, n);
        const auto c = rescaled_roots(Q, critical_hardy(Q));
        CHECK(c.lower == Approx((p - 1) / p).epsilon(1e-6));
        CHECK(c.upper == Approx((p - 1) / p).epsilon(1e-6));
        // Brute-force argmax of the rescaled map.
        double best = 0.0, arg = 0.0;
        for (int i = 0; i <= 100000; ++i) {
            const double b = i / 100000.0;
            if (mu_of_beta(Q, b) > best) best = mu_of_beta(Q, b), arg = b;
        }
        CHECK(arg == Approx((p - 1) / p).epsilon(1e-4));
    }
}

TEST_CASE("params validation") {
    CHECK(kind_of([] { Params(0.5, 3); }) == ErrorKind::DomainError);
    CHECK(kind_of([] { Params(2, 1); }) == ErrorKind::DomainError);
}
