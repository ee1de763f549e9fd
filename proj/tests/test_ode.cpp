#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "plh/diagnostics.hpp"
#include "plh/ode.hpp"

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

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

const Params kP2N3(2, 3);
const Potential kV316 = Potential::hardy(3.0 / 16.0);

} // namespace

TEST_CASE("exact power solution over two decades") {
    for (double r0 : {1.0, 2.0}) {
        const auto tr = integrate(kP2N3, kV316, r0, std::pow(r0, -0.75), -0.75 * std::pow(r0, -1.75), 100.0 * r0);
        CHECK(tr.stop == StopReason::Reached);
        CHECK(tr.monotone == Monotonicity::Decreasing);
        CHECK(tr.r_end() == Approx(100.0 * r0).epsilon(1e-14));
        for (std::size_t i = 0; i < tr.size(); ++i) CHECK(rel(tr.phi[i], std::pow(tr.r[i], -0.75)) <= 1e-6);
        CHECK(decay_fit(tr) == Approx(-0.75).epsilon(1e-6));
    }
}

TEST_CASE("interpolation between nodes") {
    const auto tr = integrate(kP2N3, kV316, 1.0, 1.0, -0.75, 100.0);
    for (std::size_t i = 0; i + 1 < tr.size(); ++i) {
        const double m = std::sqrt(tr.r[i] * tr.r[i + 1]);
        const Jet j = tr.jet(m);
        CHECK(rel(j.u, std::pow(m, -0.75)) <= 1e-8);
        CHECK(rel(j.du, -0.75 * std::pow(m, -1.75)) <= 1e-7);
        CHECK(rel(j.d2u, 0.75 * 1.75 * std::pow(m, -2.75)) <= 1e-7);
    }
    const Jet at = tr.jet(tr.r[3]);
    CHECK(at.u == tr.phi[3]);
    CHECK(at.du == tr.dphi[3]);
    CHECK_THROWS_AS(tr.jet(200.0), Error);
}

TEST_CASE("constant solution") {
    const auto tr = integrate(kP2N3, Potential::zero(), 1.0, 2.0, 0.0, 50.0);
    CHECK(tr.monotone == Monotonicity::Constant);
    for (double phi : tr.phi) CHECK(std::fabs(phi - 2.0) <= 1e-12 * 2.0);
    CHECK(std::fabs(decay_fit(tr)) <= 1e-12);
}

TEST_CASE("general p keeps the local exponent") {
    for (auto [p, n] : {std::pair{3.0, 5}, {4.0, 3}, {2.5, 7}}) {
        const Params P(p, n);
        const double lam = 0.5 * critical_hardy(P);
        for (double a : {hardy_roots(P, lam).lower, hardy_roots(P, lam).upper}) {
            const auto tr = integrate(P, Potential::hardy(lam), 1.0, 1.0, a, 10.0);
            for (double e : tr.local_exponent) CHECK(std::fabs(e - a) <= 1e-4);
            // Solution invariance: relative 1e-5 per decade.
            for (std::size_t i = 0; i < tr.size(); ++i) CHECK(rel(tr.phi[i], std::pow(tr.r[i], a)) <= 1e-5);
        }
    }
}

TEST_CASE("flux balance per accepted step") {
    const Params P(3, 5);
    const double lam = 0.5 * critical_hardy(P);
    const auto V = Potential::hardy(lam);
    IntegrateOptions o;
    const auto tr = integrate(P, V, 1.0, 1.0, -0.2, 1e3, o);
    // 5-point Gauss-Legendre on each step, in r.
    const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
    const double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                         0.2369268850561891};
    for (std::size_t i = 0; i + 1 < tr.size(); ++i) {
        const double a = tr.r[i], b = tr.r[i + 1];
        double integral = 0.0;
        for (int k = 0; k < 5; ++k) {
            const double r = 0.5 * (a + b) + 0.5 * (b - a) * x[k];
            integral += w[k] * std::pow(r, P.N() - 1) * V(P, r) * std::pow(tr.value(r), P.p() - 1);
        }
        integral *= 0.5 * (b - a);
        const double dw = tr.flux[i + 1] - tr.flux[i];
        CHECK(std::fabs(dw + integral) <= 10.0 * o.tol * (std::fabs(tr.flux[i]) + std::fabs(tr.flux[i + 1])));
    }
}

TEST_CASE("early stops and errors") {
    // phi = 2/r - 1 reaches zero at r = 2.
    const auto hit = integrate(kP2N3, Potential::zero(), 1.0, 1.0, -2.0, 10.0);
    CHECK(hit.stop == StopReason::PhiNonPositive);
    CHECK(hit.r_end() <= 2.0 + 1e-9);
    const auto turn = integrate(kP2N3, Potential::hardy(0.25), 1.0, 1.0, 1e-3, 1e4);
    CHECK(turn.stop == StopReason::GradientSignChange);

    const Params P(3, 5);
    CHECK(kind_of([&] { integrate(P, Potential::zero(), 1.0, 1.0, 0.0, 2.0); }) == ErrorKind::GradientDegenerate);
    CHECK(kind_of([&] { integrate(P, Potential::zero(), 1.0, -1.0, -1.0, 2.0); }) == ErrorKind::DomainError);
    CHECK(kind_of([&] { integrate(P, Potential::zero(), 2.0, 1.0, -1.0, 1.0); }) == ErrorKind::DomainError);
    IntegrateOptions few;
    few.max_steps = 3;
    CHECK(kind_of([&] { integrate(kP2N3, kV316, 1.0, 1.0, -0.75, 100.0, few); }) == ErrorKind::ToleranceFailure);
}

TEST_CASE("fixed-step order") {
    IntegrateOptions o;
    auto err = [&](double dt) {
        o.fixed_dt = dt;
        const auto tr = integrate(kP2N3, kV316, 1.0, 1.0, -0.75, 100.0, o);
        double e = 0.0;
        for (std::size_t i = 0; i < tr.size(); ++i) e = std::max(e, rel(tr.phi[i], std::pow(tr.r[i], -0.75)));
        return e;
    };
    const double h = std::log(100.0) / 16.0;
    CHECK(err(h) / err(h / 2) >= 16.0);
}

TEST_CASE("decay_fit windows") {
    const Params P(3, 5);
    const double a = P.critical_alpha();
    const RadialFamily u{1, a, 1.0 / 3.0, 0};
    const auto tr = Trajectory::from_family(P, Potential::zero(), u, 3.0, 1e8, 1024);
    const double d1 = std::fabs(decay_fit(tr, 10, 100) - a);
    const double d2 = std::fabs(decay_fit(tr, 1e4, 1e5) - a);
    const double d3 = std::fabs(decay_fit(tr, 1e7, 1e8) - a);
    CHECK(d1 > d2);
    CHECK(d2 > d3);
    CHECK(kind_of([&] { decay_fit(tr, 10, 10.5); }) == ErrorKind::InsufficientWindow);
}

TEST_CASE("pl_alternative examples") {
    for (auto [p, n] : {std::pair{3.0, 5}, {2.0, 3}, {4.0, 3}}) {
        const Params P(p, n);
        const auto h = hardy_roots(P, 0.5 * critical_hardy(P));
        const RadialFamily w{1, 0.5 * (h.lower + h.upper), 0, 0};
        const auto lower = pl_alternative(P, RadialFamily{1, h.lower, 0, 0}, w, Annulus{1.0});
        CHECK(lower.trend == RatioTrend::VanishingMonotone);
        CHECK(lower.supports_domination);
        CHECK(lower.finite_horizon);
        const auto upper = pl_alternative(P, RadialFamily{1, h.upper, 0, 0}, w, Annulus{1.0});
        CHECK(upper.trend == RatioTrend::BoundedAway);
        CHECK(upper.supports_non_smallness);
        const auto same = pl_alternative(P, w, w, Annulus{1.0});
        CHECK(same.trend == RatioTrend::BoundedAway);
        CHECK(same.limsup_estimate == Approx(1.0).epsilon(1e-12));
        for (double s : {1e-3, 7.0, 1e5}) {
            CHECK(pl_alternative(P, RadialFamily{s, h.lower, 0, 0}, w, Annulus{1.0}).trend == lower.trend);
            CHECK(pl_alternative(P, RadialFamily{s, h.upper, 0, 0}, w, Annulus{1.0}).trend == upper.trend);
        }
    }
}

TEST_CASE("pl_alternative on a trajectory") {
    const auto tr = integrate(kP2N3, kV316, 1.0, 1.0, -0.75, 1e6);
    const auto d = pl_alternative(kP2N3, tr, RadialFamily{1, -0.5, 0, 0}, Annulus{1.0});
    CHECK(d.trend == RatioTrend::VanishingMonotone);
    CHECK(d.horizon <= 1e6 * (1 + 1e-12));
}

TEST_CASE("quotient scans") {
    const Params P(3, 5);
    const double lam = 0.5 * critical_hardy(P);
    const auto h = hardy_roots(P, lam);
    const auto rep = quotient_extrema_scan(P, RadialFamily{1, h.lower, 0, 0},
                                           RadialFamily{1, 0.5 * (h.lower + h.upper), 0, 0},
                                           Potential::hardy(lam), Annulus{1.0, 1e4});
    CHECK(rep.monotone);
    CHECK(rep.criticals.empty());
    CHECK(rep.interior_maxima == 0);

    const double eps = 0.5 * c_star(P);
    const auto b = improved_roots(P, eps);
    const auto imp = quotient_extrema_scan(P, RadialFamily{1, P.critical_alpha(), b.lower, -0.1},
                                           RadialFamily{1, P.critical_alpha(), b.lower, 0.3 * (b.upper - b.lower)},
                                           Potential::improved(eps), Annulus{100.0, 1e5});
    CHECK(imp.monotone);
    CHECK(imp.derivative_sign < 0);
    CHECK(imp.interior_maxima == 0);

    // Swapped roles: u is a strict supersolution, so the gate fires.
    CHECK_THROWS_AS(quotient_extrema_scan(P, RadialFamily{1, 0.5 * (h.lower + h.upper), 0, 0},
                                          RadialFamily{1, h.lower, 0, 0}, Potential::hardy(lam), Annulus{1.0, 1e4}),
                    PreconditionError);
}
