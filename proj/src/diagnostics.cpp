#include "plh/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace plh {

const char* to_string(RatioTrend t) {
    switch (t) {
    case RatioTrend::VanishingMonotone: return "VanishingMonotone";
    case RatioTrend::Vanishing: return "Vanishing";
    case RatioTrend::BoundedAway: return "BoundedAway";
    case RatioTrend::Oscillating: return "Oscillating";
    }
    return "?";
}

const char* to_string(CriticalKind k) {
    switch (k) {
    case CriticalKind::LocalMin: return "LocalMin";
    case CriticalKind::LocalMax: return "LocalMax";
    case CriticalKind::Flat: return "Flat";
    }
    return "?";
}

namespace {

double log_value(const Profile& u, double r) {
    if (const auto* f = u.family()) return f->log_value(r);
    const double v = u.value(r);
    if (!(v > 0.0)) fail(ErrorKind::DomainError, "profile must stay positive, got " + std::to_string(v));
    return std::log(v);
}

// Least-squares slope of ys against xs.
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto m = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double den = sxx - sx * sx / m;
    return den > 0.0 ? (sxy - sx * sy / m) / den : 0.0;
}

// First index k such that the step condition holds for every i >= k.
template <class Pred>
std::size_t suffix_start(const std::vector<double>& lq, Pred ok) {
    std::size_t k = lq.size() - 1;
    while (k > 0 && ok(lq[k - 1], lq[k])) --k;
    return k;
}

} // namespace

RatioDiagnostic pl_alternative(const Params& params, const Profile& u, const Profile& w, const Annulus& ann,
                               double horizon, int nodes) {
    (void)params;
    if (!(horizon > ann.r0)) fail(ErrorKind::DomainError, "horizon must exceed the inner radius");
    const GridSpec spec{std::max(nodes, kMinGridNodes), horizon, std::numeric_limits<double>::infinity()};
    const Annulus capped{ann.r0, std::min(ann.R0, horizon)};
    const auto radii = profile_grid(capped, spec, {u, w});
    const std::size_t n = radii.size();

    RatioDiagnostic d{};
    d.horizon = radii.back();
    d.finite_horizon = true;
    std::vector<double> lq(n);
    for (std::size_t i = 0; i < n; ++i) {
        lq[i] = log_value(u, radii[i]) - log_value(w, radii[i]);
        d.ratios.emplace_back(radii[i], std::exp(lq[i]));
    }

    constexpr double kFlat = 1e-12;
    const std::size_t dec = suffix_start(lq, [](double a, double b) { return b - a <= kFlat; });
    const std::size_t inc = suffix_start(lq, [](double a, double b) { return b - a >= -kFlat; });

    const std::size_t tail = n - n / 4;
    auto tail_x = [&](std::size_t i) {
        const double t = std::log(radii[i]);
        return radii[tail] > 1.0 ? std::log(t) : t;
    };
    std::vector<double> xs, ys, env;
    for (std::size_t i = tail; i < n; ++i) {
        xs.push_back(tail_x(i));
        ys.push_back(lq[i]);
    }
    d.tail_log_slope = ls_slope(xs, ys);

    d.limsup_estimate = 0.0;
    for (std::size_t i = tail; i < n; ++i) d.limsup_estimate = std::max(d.limsup_estimate, d.ratios[i].second);
    d.max_ratio = 0.0;
    for (const auto& [r, q] : d.ratios) d.max_ratio = std::max(d.max_ratio, q);

    d.r1 = dec <= n / 2 ? radii[dec] : std::numeric_limits<double>::infinity();
    if (dec <= n / 2) {
        d.trend = d.tail_log_slope <= -kVanishingSlope ? RatioTrend::VanishingMonotone : RatioTrend::BoundedAway;
    } else if (inc <= n / 2) {
        d.trend = RatioTrend::BoundedAway;
    } else {
        // Upper envelope max_{j >= i} of the log ratio over the tail.
        double run = -std::numeric_limits<double>::infinity();
        env.assign(n - tail, 0.0);
        for (std::size_t i = n; i-- > tail;) {
            run = std::max(run, lq[i]);
            env[i - tail] = run;
        }
        const double env_slope = ls_slope(xs, env);
        d.trend = env_slope <= -kVanishingSlope ? RatioTrend::Vanishing : RatioTrend::Oscillating;
    }
    d.supports_domination = d.trend == RatioTrend::VanishingMonotone || d.trend == RatioTrend::Vanishing;
    d.supports_non_smallness = d.trend == RatioTrend::BoundedAway;
    return d;
}

namespace {

int sign_with_band(double x, double band) {
    if (x > band) return 1;
    if (x < -band) return -1;
    return 0;
}

// d log(u/v) / dr and its natural scale.
std::pair<double, double> log_quotient_slope(const Profile& u, const Profile& v, double r) {
    const Jet a = u.jet(r);
    const Jet b = v.jet(r);
    const double su = a.du / a.u;
    const double sv = b.du / b.u;
    return {su - sv, std::fabs(su) + std::fabs(sv)};
}

void require_strict_monotone(const ClassificationReport& rep, const char* name) {
    int s0 = 0;
    for (const auto& e : rep.evidence) {
        const int s = e.du > 0.0 ? 1 : (e.du < 0.0 ? -1 : 0);
        if (s == 0 || (s0 != 0 && s != s0))
            throw PreconditionError(std::string(name) + " is not strictly monotone on the grid", e.r);
        s0 = s;
    }
}

} // namespace

QuotientScanReport quotient_extrema_scan(const Params& params, const Profile& u, const Profile& v,
                                         const Potential& V, const Annulus& ann, const GridSpec& grid) {
    const auto radii = profile_grid(ann, grid, {u, v});
    const Annulus box{radii.front(), radii.back()};
    const GridSpec spec{grid.nodes, radii.back(), std::numeric_limits<double>::infinity()};
    const auto cu = classify(params, u, V, box, spec);
    const auto cv = classify(params, v, V, box, spec);

    QuotientScanReport rep{};
    rep.u_verdict = cu.verdict;
    rep.v_verdict = cv.verdict;
    rep.u_strict = cu.verdict == Verdict::Subsolution && cu.strict;
    rep.v_strict = cv.verdict == Verdict::Supersolution && cv.strict;

    const bool u_ok = (cu.verdict == Verdict::Subsolution || cu.verdict == Verdict::Solution) && holds_on_whole_grid(cu);
    const bool v_ok =
        (cv.verdict == Verdict::Supersolution || cv.verdict == Verdict::Solution) && holds_on_whole_grid(cv);
    if (!u_ok)
        throw PreconditionError(std::string("u is not a subsolution on the whole annulus (") + to_string(cu.verdict) +
                                    ")",
                                cu.rho0);
    if (!v_ok)
        throw PreconditionError(
            std::string("v is not a supersolution on the whole annulus (") + to_string(cv.verdict) + ")", cv.rho0);
    if (!rep.u_strict && !rep.v_strict)
        throw PreconditionError("neither u nor v is strict on the annulus", std::nan(""));
    require_strict_monotone(cu, "u");
    require_strict_monotone(cv, "v");

    constexpr double kBand = 1e-12;
    std::vector<int> signs(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const auto [g, sc] = log_quotient_slope(u, v, radii[i]);
        signs[i] = sign_with_band(g, kBand * sc);
    }

    auto q = [&](double r) { return std::exp(log_value(u, r) - log_value(v, r)); };
    int last_sign = 0;
    std::size_t last_idx = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (signs[i] == 0) continue;
        if (rep.derivative_sign == 0) rep.derivative_sign = signs[i];
        if (last_sign != 0 && signs[i] != last_sign) {
            rep.monotone = false;
            double lo = radii[last_idx], hi = radii[i];
            for (int it = 0; it < 80 && hi - lo > 1e-15 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                const int s = sign_with_band(log_quotient_slope(u, v, mid).first, 0.0);
                if (s == last_sign)
                    lo = mid;
                else
                    hi = mid;
            }
            const double rho = 0.5 * (lo + hi);
            const double h = std::min({1e-4 * rho, rho - radii.front(), radii.back() - rho});
            const double d2 = h > 0.0 ? q(rho + h) - 2.0 * q(rho) + q(rho - h) : 0.0;
            const CriticalKind kind = last_sign > 0 ? CriticalKind::LocalMax : CriticalKind::LocalMin;
            rep.criticals.push_back({rho, kind, d2});
            if (kind == CriticalKind::LocalMax) ++rep.interior_maxima;
        }
        last_sign = signs[i];
        last_idx = i;
    }
    if (rep.derivative_sign == 0) rep.criticals.push_back({radii.front(), CriticalKind::Flat, 0.0});
    return rep;
}

} // namespace plh
