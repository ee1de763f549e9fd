#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "plh/comparison.hpp"

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

TEST_CASE("harmonic interpolant") {
    const BvpProblem prob{Params(2, 3), Potential::zero(), {1.0, 2.0}, 1.0, 0.5};
    const auto sol = solve_bvp(prob);
    CHECK(sol.boundary_residual <= 1e-10 * 1.5);
    for (std::size_t i = 0; i < sol.trajectory.size(); ++i)
        CHECK(sol.trajectory.phi[i] == Approx(1.0 / sol.trajectory.r[i]).epsilon(1e-8));
    const auto rep = classify(Params(2, 3), Profile(sol.trajectory), Potential::zero(), Annulus{1.0, 2.0},
                              GridSpec{64});
    CHECK(rep.verdict == Verdict::Solution);
}

TEST_CASE("logarithmic interpolant in the plane") {
    const BvpProblem prob{Params(2, 2), Potential::zero(), {1.0, 10.0}, 3.0, 1.0};
    const auto sol = solve_bvp(prob);
    const double b = -2.0 / std::log(10.0);
    for (std::size_t i = 0; i < sol.trajectory.size(); ++i)
        CHECK(sol.trajectory.phi[i] == Approx(3.0 + b * std::log(sol.trajectory.r[i])).epsilon(1e-8));
}

TEST_CASE("Hardy boundary trace recovers the power") {
    for (auto [p, n] : {std::pair{3.0, 5}, {2.5, 7}, {4.0, 3}}) {
        const Params P(p, n);
        const double lam = 0.5 * critical_hardy(P);
        const double a = hardy_roots(P, lam).lower;
        const BvpProblem prob{P, Potential::hardy(lam), {1.0, 10.0}, 1.0, std::pow(10.0, a)};
        const auto sol = solve_bvp(prob);
        CHECK(sol.boundary_residual <= 1e-10 * (1.0 + prob.outer));
        for (std::size_t i = 0; i < sol.trajectory.size(); ++i)
            CHECK(sol.trajectory.phi[i] == Approx(std::pow(sol.trajectory.r[i], a)).epsilon(1e-6));
    }
}

TEST_CASE("equal boundary values") {
    const auto sol = solve_bvp({Params(3, 5), Potential::zero(), {1.0, 4.0}, 2.0, 2.0});
    for (double phi : sol.trajectory.phi) CHECK(phi == 2.0);
    CHECK(kind_of([] { solve_bvp({Params(3, 5), Potential::hardy(0.1), {1.0, 4.0}, 2.0, 2.0}); }) ==
          ErrorKind::PreconditionViolated);
}

TEST_CASE("bvp gates") {
    CHECK(kind_of([] { solve_bvp({Params(2, 3), Potential::zero(), {1.0}, 1.0, 0.5}); }) == ErrorKind::DomainError);
    CHECK(kind_of([] { solve_bvp({Params(2, 3), Potential::zero(), {1.0, 2.0}, 1.0, 1e12}); }) ==
          ErrorKind::NoBracket);
}

TEST_CASE("outer value is monotone in the initial slope") {
    const Params P(3, 5);
    const auto V = Potential::hardy(0.5 * critical_hardy(P));
    double prev = -1.0;
    for (int k = 0; k < 32; ++k) {
        const double slope = -std::pow(10.0, -3.0 + 3.0 * k / 31.0);
        const auto tr = integrate(P, V, 1.0, 1.0, slope, 2.0, IntegrateOptions{1e-12});
        if (tr.stop != StopReason::Reached) break;
        const double hit = tr.phi.back();
        if (prev >= 0.0) CHECK(hit < prev);
        prev = hit;
    }
}

TEST_CASE("comparison examples") {
    const Params P(3, 5);
    const double lam = 0.5 * critical_hardy(P);
    const auto h = hardy_roots(P, lam);
    const auto V = Potential::hardy(lam);
    const Annulus ann{1.0, 20.0};
    const RadialFamily u{1, h.lower, 0, 0};

    const auto margin = comparison_verify(P, V, ann, u, u.scaled(1.1));
    CHECK(margin.holds);
    CHECK(margin.worst_excess < 0.0);
    CHECK_FALSE(margin.certificate.origin.empty());

    const RadialFamily vb{1, 0.5 * (h.lower + h.upper), 0, 0};
    const double s = std::max(u.jet(1.0).u / vb.jet(1.0).u, u.jet(20.0).u / vb.jet(20.0).u);
    const auto rep = comparison_verify(P, V, ann, u, vb.scaled(s));
    CHECK(rep.holds);
    CHECK(rep.violations == 0);

    CHECK_THROWS_AS(comparison_verify(P, V, ann, u, vb.scaled(0.5 * s)), PreconditionError);
    CHECK_THROWS_AS(comparison_verify(P, V, Annulus{1.0}, u, u.scaled(1.1)), Error);
}

TEST_CASE("certificate catalog") {
    for (auto [p, n] : {std::pair{3.0, 5}, {2.0, 3}, {4.0, 3}, {3.0, 3}}) {
        const Params P(p, n);
        const Annulus ann{3.0, 100.0};
        CHECK(find_certificate(P, Potential::hardy(critical_hardy(P)), ann).has_value());
        CHECK(find_certificate(P, Potential::improved(0.5 * c_star(P)), ann).has_value());
        CHECK(find_certificate(P, Potential::zero(), ann).has_value());
    }
}

TEST_CASE("growth dichotomy examples") {
    const Params P(4, 3);
    const double lam = 0.5 * critical_hardy(P);
    const auto h = hardy_roots(P, lam);
    const auto V = Potential::hardy(lam);
    const Annulus ann{1.0, 100.0};
    const RadialFamily v{1, 0.5 * (h.lower + h.upper), 0, 0};

    const auto dec = growth_dichotomy_check(P, V, RadialFamily{1, h.lower, 0, 0}, v, ann);
    CHECK(dec.regime == GrowthRegime::NonIncreasing);
    const auto inc = growth_dichotomy_check(P, V, RadialFamily{1, h.upper, 0, 0}, v, ann);
    CHECK(inc.regime == GrowthRegime::EventuallyNonDecreasing);
    CHECK(inc.rho_star == Approx(1.0));
    const RadialFamily s0{1, h.lower, 0, 0};
    const auto eq = growth_dichotomy_check(P, V, s0, s0, ann);
    CHECK(eq.regime == GrowthRegime::Constant);
    CHECK(eq.non_increasing);
    CHECK(eq.eventually_non_decreasing);

    // Rescaling u does not move the regime after normalization.
    for (double s : {1e-3, 5.0}) {
        const auto a = growth_dichotomy_check(P, V, RadialFamily{s, h.upper, 0, 0}, v, ann);
        CHECK(a.regime == inc.regime);
        CHECK(a.rho_star == inc.rho_star);
    }
    CHECK_THROWS_AS(growth_dichotomy_check(Params(3, 5), Potential::zero(), v, v, ann), PreconditionError);
}
