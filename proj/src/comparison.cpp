#include "plh/comparison.hpp"

#include <algorithm>
#include <cmath>

#include "plh/roots.hpp"

namespace plh {

void BvpProblem::validate() const {
    ann.validate();
    if (!ann.bounded()) fail(ErrorKind::DomainError, "boundary value problems need a finite outer radius");
    if (!(std::isfinite(inner) && inner > 0.0)) fail(ErrorKind::DomainError, "inner boundary value must be > 0");
    if (!(std::isfinite(outer) && outer >= 0.0)) fail(ErrorKind::DomainError, "outer boundary value must be >= 0");
}

BvpSolution solve_bvp(const BvpProblem& prob, const BvpOptions& opts) {
    prob.validate();
    const Params& params = prob.params;
    const double r0 = prob.ann.r0;
    const double R0 = prob.ann.R0;

    if (prob.inner == prob.outer) {
        if (!prob.V.is_zero())
            throw PreconditionError("equal boundary values only admit the monotone (constant) regime when V = 0",
                                    std::nan(""));
        const RadialFamily c{prob.inner, 0.0, 0.0, 0.0};
        return {Trajectory::from_family(params, prob.V, c, r0, R0, 256), 0.0, 0.0, 0};
    }

    const double dir = prob.outer < prob.inner ? -1.0 : 1.0;
    const double target = prob.outer;
    const double band = opts.tol * (1.0 + std::fabs(target));
    IntegrateOptions io;
    io.tol = opts.integrator_tol;

    auto shoot = [&](double slope) -> double {
        try {
            const auto tr = integrate(params, prob.V, r0, prob.inner, slope, R0, io);
            switch (tr.stop) {
            case StopReason::Reached: return tr.phi.back() - target;
            // phi reached zero before R0: certainly below any admissible target.
            case StopReason::PhiNonPositive: return -(1.0 + std::fabs(target));
            case StopReason::GradientSignChange: return tr.phi.back() - target;
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Blowup) return std::numeric_limits<double>::max();
            throw;
        }
        return std::nan("");
    };

    const int m = std::max(opts.scan_slopes, 2);
    const double lo_mag = prob.inner * 1e-6 / r0;
    const double hi_mag = prob.inner * 1e3 / r0;
    const auto mags = geometric_grid(lo_mag, hi_mag, m);
    double prev_s = dir * mags[0];
    double prev_f = shoot(prev_s);
    double a = 0, b = 0;
    bool found = std::fabs(prev_f) <= band;
    if (found) a = b = prev_s;
    for (int k = 1; k < m && !found; ++k) {
        const double s = dir * mags[static_cast<std::size_t>(k)];
        const double f = shoot(s);
        if (std::fabs(f) <= band) {
            a = b = s;
            found = true;
        } else if (std::signbit(f) != std::signbit(prev_f)) {
            a = prev_s;
            b = s;
            found = true;
        }
        prev_s = s;
        prev_f = f;
    }
    if (!found)
        fail(ErrorKind::NoBracket, "no initial slope in the scan range reaches the outer boundary value");

    double slope = a;
    int iterations = 0;
    if (a != b) {
        const auto res = roots::bracketed_until(
            shoot, a, b, [&](double, double fx) { return std::fabs(fx) <= band; }, opts.max_iterations);
        slope = res.x;
        iterations = res.iterations;
    }
    auto tr = integrate(params, prob.V, r0, prob.inner, slope, R0, io);
    if (tr.stop != StopReason::Reached)
        fail(ErrorKind::ToleranceFailure, "shooting converged to a trajectory that stops before R0");
    const double miss = std::fabs(tr.phi.back() - target);
    if (miss > band)
        fail(ErrorKind::ToleranceFailure, "shooting could not meet the boundary tolerance (miss " +
                                              std::to_string(miss) + ")");
    return {std::move(tr), slope, miss, iterations};
}

namespace {

bool strict_super_everywhere(const ClassificationReport& c) {
    return c.verdict == Verdict::Supersolution && c.strict && holds_on_whole_grid(c);
}

std::vector<std::pair<RadialFamily, std::string>> catalog(const Params& params, const Potential& V) {
    std::vector<std::pair<RadialFamily, std::string>> out;
    const double p = params.p();
    const double a_star = params.critical_alpha();
    double lambda = -1.0;
    if (V.is_zero()) lambda = 0.0;
    if (const auto* h = std::get_if<Potential::PureHardy>(&V.variant())) lambda = h->lambda;

    if (lambda >= 0.0) {
        if (params.critical_dimension()) {
            out.push_back({{1.0, 0.0, 0.5, 0.0}, "log^(1/2) r"});
        } else if (lambda <= critical_hardy(params) * (1.0 + kCriticalClampRel)) {
            const auto rt = hardy_roots(params, lambda);
            if (!rt.degenerate)
                for (double f : {0.5, 0.25, 0.75})
                    out.push_back({{1.0, rt.lower + f * (rt.upper - rt.lower), 0.0, 0.0}, "power between Hardy roots"});
            out.push_back({{1.0, a_star, 1.0 / p, 0.0}, "critical power with log^(1/p)"});
        }
    }
    if (const auto* im = std::get_if<Potential::ImprovedHardy>(&V.variant())) {
        if (im->epsilon <= c_star(params) * (1.0 + kCriticalClampRel)) {
            const auto rt = improved_roots(params, im->epsilon);
            const double alpha = params.critical_dimension() ? 0.0 : a_star;
            if (!rt.degenerate) {
                // Near r0 the asymptotic sign can lag; off-centre exponents often qualify earlier.
                for (double f : {0.5, 0.25, 0.75, 0.1, 0.9})
                    out.push_back({{1.0, alpha, rt.lower + f * (rt.upper - rt.lower), 0.0},
                                   "log power between improved roots"});
            } else
                out.push_back({{1.0, alpha, rt.lower, params.critical_dimension() ? 1.0 / params.dim() : 1.0 / p},
                               "critical log-log member"});
        }
    }
    // Generic fallback: pure powers across the Hardy range and beyond.
    const double e = params.extreme_alpha();
    const double lo = std::min(e, 0.0) - 1.0;
    const double hi = std::max(e, 0.0) + 1.0;
    for (int k = 0; k <= 80; ++k) {
        const double beta = lo + (hi - lo) * k / 80.0;
        out.push_back({{1.0, beta, 0.0, 0.0}, "power scan"});
    }
    return out;
}

} // namespace

std::optional<Certificate> find_certificate(const Params& params, const Potential& V, const Annulus& ann,
                                            const GridSpec& grid) {
    for (auto& [w, label] : catalog(params, V)) {
        if (!(ann.r0 > w.domain_min())) continue;
        try {
            auto rep = classify(params, w, V, ann, grid);
            if (strict_super_everywhere(rep)) return Certificate{w, label, std::move(rep)};
        } catch (const Error&) {
            continue;
        }
    }
    return std::nullopt;
}

ComparisonReport comparison_verify(const Params& params, const Potential& V, const Annulus& ann, const Profile& u,
                                   const Profile& v, const GridSpec& grid,
                                   const std::optional<RadialFamily>& certificate) {
    ann.validate();
    if (!ann.bounded()) fail(ErrorKind::DomainError, "comparison needs a finite outer radius");
    const auto radii = profile_grid(ann, grid, {u, v});
    if (radii.back() < ann.R0) throw PreconditionError("a candidate does not reach the outer sphere", radii.back());
    const GridSpec spec{grid.nodes, ann.R0, std::numeric_limits<double>::infinity()};

    const auto cu = classify(params, u, V, ann, spec);
    const auto cv = classify(params, v, V, ann, spec);
    if (!((cu.verdict == Verdict::Subsolution || cu.verdict == Verdict::Solution) && holds_on_whole_grid(cu)))
        throw PreconditionError(std::string("u is not a subsolution on the annulus (") + to_string(cu.verdict) + ")",
                                cu.rho0);
    if (!((cv.verdict == Verdict::Supersolution || cv.verdict == Verdict::Solution) && holds_on_whole_grid(cv)))
        throw PreconditionError(
            std::string("v is not a supersolution on the annulus (") + to_string(cv.verdict) + ")", cv.rho0);

    auto above = [](double a, double b) { return a - b > kComparisonBand * (std::fabs(a) + std::fabs(b)); };
    for (double r : {ann.r0, ann.R0}) {
        const double ur = u.value(r), vr = v.value(r);
        if (vr < 0.0) throw PreconditionError("v is negative on the boundary", r);
        if (above(ur, vr)) throw PreconditionError("boundary ordering u <= v fails", r);
    }

    ComparisonReport rep{};
    rep.u_verdict = cu.verdict;
    rep.v_verdict = cv.verdict;
    if (certificate) {
        if (!(ann.r0 > certificate->domain_min()))
            throw PreconditionError("certificate is not defined on the annulus", ann.r0);
        auto c = classify(params, *certificate, V, ann, spec);
        if (!strict_super_everywhere(c))
            throw PreconditionError("given certificate is not a strict supersolution on the annulus", c.rho0);
        rep.certificate = {*certificate, "given", std::move(c)};
    } else {
        auto found = find_certificate(params, V, ann, spec);
        if (!found) throw PreconditionError("no strict supersolution found to certify condition (*)", std::nan(""));
        rep.certificate = std::move(*found);
    }

    rep.worst_excess = -std::numeric_limits<double>::infinity();
    for (double r : radii) {
        const double ur = u.value(r), vr = v.value(r);
        if (vr < 0.0) throw PreconditionError("v is negative", r);
        const double excess = (ur - vr) / (std::fabs(ur) + std::fabs(vr));
        if (excess > rep.worst_excess) {
            rep.worst_excess = excess;
            rep.worst_radius = r;
        }
        if (above(ur, vr)) {
            ++rep.violations;
            rep.violation_nodes.emplace_back(r, ur - vr);
        }
    }
    rep.holds = rep.violations == 0;
    return rep;
}

const char* to_string(GrowthRegime g) {
    switch (g) {
    case GrowthRegime::NonIncreasing: return "NonIncreasing";
    case GrowthRegime::EventuallyNonDecreasing: return "EventuallyNonDecreasing";
    case GrowthRegime::Constant: return "Constant";
    case GrowthRegime::Undetermined: return "Undetermined";
    }
    return "?";
}

GrowthReport growth_dichotomy_check(const Params& params, const Potential& V, const Profile& u, const Profile& v,
                                    const Annulus& ann, const GridSpec& grid) {
    if (params.p() < 2.0) throw PreconditionError("growth dichotomy requires p >= 2", std::nan(""));
    const auto radii = profile_grid(ann, grid, {u, v});
    const Annulus box{radii.front(), radii.back()};
    const GridSpec spec{grid.nodes, radii.back(), std::numeric_limits<double>::infinity()};
    const auto cu = classify(params, u, V, box, spec);
    const auto cv = classify(params, v, V, box, spec);
    if (!((cu.verdict == Verdict::Subsolution || cu.verdict == Verdict::Solution) && holds_on_whole_grid(cu)))
        throw PreconditionError(std::string("u is not a subsolution on the annulus (") + to_string(cu.verdict) + ")",
                                cu.rho0);
    if (!((cv.verdict == Verdict::Supersolution || cv.verdict == Verdict::Solution) && holds_on_whole_grid(cv)))
        throw PreconditionError(
            std::string("v is not a supersolution on the annulus (") + to_string(cv.verdict) + ")", cv.rho0);

    GrowthReport rep{};
    const Jet u0 = u.jet(radii.front());
    const Jet v0 = v.jet(radii.front());
    std::vector<int> signs;
    for (double r : radii) {
        const Jet ju = u.jet(r), jv = v.jet(r);
        if (!(ju.u > 0.0 && jv.u > 0.0)) throw PreconditionError("u and v must be positive", r);
        if (!(ju.du > 0.0)) throw PreconditionError("u is not strictly increasing", r);
        if (!(jv.du > 0.0)) throw PreconditionError("v is not strictly increasing", r);
        rep.quotient.emplace_back(r, (ju.u / u0.u) / (jv.u / v0.u));
        const double su = ju.du / ju.u, sv = jv.du / jv.u;
        const double g = su - sv;
        const double band = 1e-12 * (std::fabs(su) + std::fabs(sv));
        signs.push_back(g > band ? 1 : (g < -band ? -1 : 0));
    }
    rep.non_increasing = std::none_of(signs.begin(), signs.end(), [](int s) { return s > 0; });
    std::size_t k = signs.size();
    while (k > 0 && signs[k - 1] >= 0) --k;
    const std::size_t tail = signs.size() - k;
    rep.eventually_non_decreasing = tail >= static_cast<std::size_t>(kMinUniformTail);
    rep.rho_star = rep.eventually_non_decreasing ? radii[k] : std::numeric_limits<double>::infinity();
    if (rep.non_increasing && rep.eventually_non_decreasing)
        rep.regime = GrowthRegime::Constant;
    else if (rep.non_increasing)
        rep.regime = GrowthRegime::NonIncreasing;
    else if (rep.eventually_non_decreasing)
        rep.regime = GrowthRegime::EventuallyNonDecreasing;
    else
        rep.regime = GrowthRegime::Undetermined;
    return rep;
}

} // namespace plh
