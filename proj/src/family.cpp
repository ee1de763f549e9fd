#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "plh/family.hpp"

namespace plh {

void RadialFamily::validate() const {
    if (!(std::isfinite(c) && c > 0.0)) fail(ErrorKind::DomainError, "family amplitude c must be > 0");
    if (!(std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(tau)))
        fail(ErrorKind::DomainError, "family exponents must be finite");
}

double RadialFamily::domain_min() const {
    if (tau != 0.0) return std::numbers::e;
    if (beta != 0.0) return 1.0;
    return 0.0;
}

namespace {

void require_domain(const RadialFamily& u, double r) {
    if (!(std::isfinite(r) && r > u.domain_min()))
        fail(ErrorKind::DomainError, "radius " + std::to_string(r) + " outside the family domain r > " +
                                         std::to_string(u.domain_min()));
}

// A = d log u / d log r and its derivative with respect to t = log r.
struct LogSlope {
    double a;
    double a_t;
};

LogSlope log_slope_parts(const RadialFamily& u, double r) {
    double a = u.alpha;
    double a_t = 0.0;
    if (u.beta != 0.0 || u.tau != 0.0) {
        const double t = std::log(r);
        if (u.beta != 0.0) {
            a += u.beta / t;
            a_t -= u.beta / (t * t);
        }
        if (u.tau != 0.0) {
            const double s = std::log(t);
            a += u.tau / (t * s);
            a_t -= u.tau * (s + 1.0) / (t * t * s * s);
        }
    }
    return {a, a_t};
}

} // namespace

double RadialFamily::log_value(double r) const {
    require_domain(*this, r);
    const double t = std::log(r);
    double v = std::log(c) + alpha * t;
    if (beta != 0.0) v += beta * std::log(t);
    if (tau != 0.0) v += tau * std::log(std::log(t));
    return v;
}

double RadialFamily::log_slope(double r) const {
    require_domain(*this, r);
    return log_slope_parts(*this, r).a;
}

Jet RadialFamily::jet(double r) const {
    require_domain(*this, r);
    double u = c * std::pow(r, alpha);
    if (beta != 0.0 || tau != 0.0) {
        const double t = std::log(r);
        if (beta != 0.0) u *= std::pow(t, beta);
        if (tau != 0.0) u *= std::pow(std::log(t), tau);
    }
    if (!std::isfinite(u) || u == 0.0) u = std::exp(log_value(r));
    const auto [a, a_t] = log_slope_parts(*this, r);
    return {u, u * a / r, u * (a * a - a + a_t) / (r * r)};
}

void Annulus::validate() const {
    if (!(std::isfinite(r0) && r0 > 0.0)) fail(ErrorKind::DomainError, "annulus inner radius must be > 0");
    if (!(R0 > r0)) fail(ErrorKind::DomainError, "annulus outer radius must exceed the inner radius");
}

std::vector<double> geometric_grid(double r0, double r1, int nodes) {
    if (nodes < 2 || !(r0 > 0.0) || !(r1 > r0) || !std::isfinite(r1))
        fail(ErrorKind::DomainError, "geometric grid needs 0 < r0 < r1 < inf and >= 2 nodes");
    std::vector<double> g(static_cast<std::size_t>(nodes));
    const double l0 = std::log(r0);
    const double l1 = std::log(r1);
    for (int i = 0; i < nodes; ++i)
        g[static_cast<std::size_t>(i)] = std::exp(l0 + (l1 - l0) * i / (nodes - 1));
    g.front() = r0;
    g.back() = r1;
    return g;
}

std::vector<double> annulus_grid(const Annulus& ann, const GridSpec& spec) {
    ann.validate();
    if (spec.nodes < kMinGridNodes)
        fail(ErrorKind::DomainError, "grid needs at least " + std::to_string(kMinGridNodes) + " nodes");
    const double end = ann.bounded() ? ann.R0 : spec.r_max;
    if (!(end > ann.r0)) fail(ErrorKind::DomainError, "grid end must exceed the inner radius");
    return geometric_grid(ann.r0, end, spec.nodes);
}

double radial_L(const Params& params, const Jet& jet, double r) {
    return (params.p() - 1.0) * jet.d2u + (params.dim() - 1.0) / r * jet.du;
}

double radial_L(const Params& params, const RadialFamily& u, double r) {
    return radial_L(params, u.jet(r), r);
}

ResidualParts residual_parts(const Params& params, const Jet& jet, double v_at_r, double r) {
    const double p = params.p();
    double grad_factor = 1.0;
    if (p != 2.0) {
        if (std::fabs(jet.du) < 1e-300)
            fail(ErrorKind::DegenerateGradient, "u'(r) vanishes at r = " + std::to_string(r));
        grad_factor = std::pow(std::fabs(jet.du), p - 2.0);
    }
    const double grad_term = grad_factor * radial_L(params, jet, r);
    const double pot_term = v_at_r * signed_pow(jet.u, p - 1.0);
    // Term-wise magnitudes, so an operator that cancels to roundoff still
    // has a meaningful scale.
    const double l_mag = (p - 1.0) * std::fabs(jet.d2u) + (params.N() - 1.0) / r * std::fabs(jet.du);
    return {-grad_term - pot_term, grad_factor * l_mag + std::fabs(pot_term) + 1e-300};
}

ResidualParts residual_parts(const Params& params, const RadialFamily& u, const Potential& V, double r) {
    return residual_parts(params, u.jet(r), V(params, r), r);
}

double residual(const Params& params, const RadialFamily& u, const Potential& V, double r) {
    return residual_parts(params, u, V, r).residual;
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Subsolution: return "Subsolution";
    case Verdict::Supersolution: return "Supersolution";
    case Verdict::Solution: return "Solution";
    case Verdict::Neither: return "Neither";
    case Verdict::MixedSign: return "MixedSign";
    }
    return "?";
}

ClassificationReport classify_evidence(std::vector<EvidencePoint> evidence, double rho0_limit) {
    ClassificationReport rep{Verdict::Solution, 0.0, false, 0.0, std::move(evidence)};
    const auto& ev = rep.evidence;
    if (ev.empty()) fail(ErrorKind::InconclusiveGrid, "empty evidence grid");

    auto sign_of = [](const EvidencePoint& e) {
        if (e.scaled > kDeadBand) return 1;
        if (e.scaled < -kDeadBand) return -1;
        return 0;
    };
    for (const auto& e : ev) rep.max_abs_scaled = std::max(rep.max_abs_scaled, std::fabs(e.scaled));

    const auto n = static_cast<std::ptrdiff_t>(ev.size());
    std::ptrdiff_t last = n - 1;
    while (last >= 0 && sign_of(ev[static_cast<std::size_t>(last)]) == 0) --last;
    if (last < 0) {
        rep.verdict = Verdict::Solution;
        rep.rho0 = ev.front().r;
        return rep;
    }
    const int tail = sign_of(ev[static_cast<std::size_t>(last)]);
    std::ptrdiff_t start = last;
    while (start > 0 && sign_of(ev[static_cast<std::size_t>(start - 1)]) != -tail) --start;

    if (n - start < kMinUniformTail) {
        rep.verdict = Verdict::MixedSign;
        rep.rho0 = std::numeric_limits<double>::infinity();
        return rep;
    }
    rep.rho0 = ev[static_cast<std::size_t>(start)].r;
    rep.strict = std::all_of(ev.begin() + start, ev.end(), [&](const auto& e) { return sign_of(e) != 0; });
    if (rep.rho0 > rho0_limit)
        rep.verdict = Verdict::Neither;
    else
        rep.verdict = tail < 0 ? Verdict::Subsolution : Verdict::Supersolution;
    return rep;
}

ClassificationReport classify(const Params& params, const RadialFamily& u, const Potential& V,
                              const Annulus& ann, const GridSpec& grid) {
    u.validate();
    ann.validate();
    if (!(ann.r0 > u.domain_min()))
        fail(ErrorKind::DomainError, "annulus inner radius must exceed the family domain bound " +
                                         std::to_string(u.domain_min()));
    const auto radii = annulus_grid(ann, grid);
    std::vector<EvidencePoint> ev;
    ev.reserve(radii.size());
    for (double r : radii) {
        const Jet j = u.jet(r);
        const auto parts = residual_parts(params, j, V(params, r), r);
        ev.push_back({r, j.u, j.du, parts.residual, parts.scaled()});
    }
    return classify_evidence(std::move(ev), grid.rho0_limit);
}

} // namespace plh
