#include "plh/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace plh {

void Quadruple::validate() const {
    if (!(std::isfinite(a) && a >= 0.0 && std::isfinite(b) && b >= 0.0))
        fail(ErrorKind::DomainError, "a and b must be finite and >= 0");
    if (!(std::isfinite(c) && c > 0.0 && std::isfinite(d) && d > 0.0))
        fail(ErrorKind::DomainError, "c and d must be finite and > 0");
    if (!(std::isfinite(q) && q > 0.0)) fail(ErrorKind::DomainError, "q must be finite and > 0");
}

namespace {

constexpr double kBig = 1e100;
constexpr double kSmall = 1e-100;

bool outside_safe_range(double x) { return x != 0.0 && (x > kBig || x < kSmall); }

// log of x^q / y^(q-1); -inf for x = 0.
double log_term(double x, double y, double q) {
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    return q * std::log(x) - (q - 1.0) * std::log(y);
}

double term(double x, double y, double q) {
    if (x == 0.0) return 0.0;
    return std::pow(x, q) / std::pow(y, q - 1.0);
}

} // namespace

GapParts convexity_gap_parts(const Quadruple& quad) {
    quad.validate();
    const auto [a, b, c, d, q] = quad;
    const double ab = a + b;
    const double cd = c + d;
    if (ab == 0.0) return {0.0, 0.0, 0.0};

    const bool log_space = outside_safe_range(a) || outside_safe_range(b) || outside_safe_range(c) ||
                           outside_safe_range(d) || outside_safe_range(ab) || outside_safe_range(cd);
    if (!log_space) {
        const double rhs = term(a, c, q) + term(b, d, q);
        const double lhs = term(ab, cd, q);
        const double scale = std::fabs(lhs) + std::fabs(rhs);
        if (std::isfinite(scale)) return {rhs - lhs, scale, scale > 0.0 ? (rhs - lhs) / scale : 0.0};
    }
    const double l1 = log_term(a, c, q);
    const double l2 = log_term(b, d, q);
    const double l3 = log_term(ab, cd, q);
    const double m = std::max({l1, l2, l3});
    const double t1 = std::exp(l1 - m), t2 = std::exp(l2 - m), t3 = std::exp(l3 - m);
    const double unit_gap = t1 + t2 - t3;
    const double unit_scale = t1 + t2 + t3;
    const double factor = std::exp(m);
    return {unit_gap * factor, unit_scale * factor, unit_gap / unit_scale};
}

double convexity_gap(const Quadruple& quad) { return convexity_gap_parts(quad).gap; }

InequalitySuiteReport inequality_suite(double q_min, double q_max, int samples, std::uint64_t seed) {
    if (!(q_min > 0.0 && q_max >= q_min && std::isfinite(q_max)))
        fail(ErrorKind::DomainError, "q range must satisfy 0 < q_min <= q_max");
    if (samples < 1) fail(ErrorKind::DomainError, "samples must be >= 1");

    InequalitySuiteReport rep{seed, samples, q_min, q_max};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> log10u(-1.0, 1.0);
    auto positive = [&] { return std::pow(10.0, log10u(rng)); };
    auto nonneg = [&] { return unit(rng) < 0.02 ? 0.0 : positive(); };

    for (int i = 0; i < samples; ++i) {
        const double q = q_min + (q_max - q_min) * unit(rng);
        const Quadruple x{nonneg(), nonneg(), positive(), positive(), q};
        const auto g = convexity_gap_parts(x);
        const double tol = 1e-12 * g.scale;
        double excess = 0.0;
        if (q >= 1.0) excess = std::max(excess, -g.gap - tol);
        if (q <= 1.0) excess = std::max(excess, g.gap - tol);
        if (excess > 0.0) {
            ++rep.sign_violations;
            rep.worst_sign_excess = std::max(rep.worst_sign_excess, excess / std::max(g.scale, 1e-300));
        }

        const double ad = x.a * x.d, bc = x.b * x.c;
        if (q >= 1.5 && ad + bc > 0.0 && std::fabs(ad - bc) >= 0.1 * (ad + bc)) {
            ++rep.strict_checked;
            if (!(g.gap > 1e-6 * g.scale)) ++rep.strict_violations;
        }

        // Equality companion: same a, b, c with d chosen so that ad = bc.
        if (x.a > 0.0 && x.b > 0.0) {
            const Quadruple e{x.a, x.b, x.c, x.b * x.c / x.a, q};
            const double ead = e.a * e.d, ebc = e.b * e.c;
            if (e.d > 0.0 && std::fabs(ead - ebc) <= 1e-14 * (ead + ebc)) {
                ++rep.equality_checked;
                const auto ge = convexity_gap_parts(e);
                if (std::fabs(ge.gap) > 1e-10 * ge.scale) ++rep.equality_violations;
            }
        }
    }
    return rep;
}

namespace {

enum class Mode { Sub, Super };

DifferenceReport difference_check(const Params& params, const Profile& u, const Profile& v, const Potential& V,
                                  const Annulus& ann, const GridSpec& grid, Mode mode) {
    const double p = params.p();
    if (mode == Mode::Sub && p < 2.0)
        throw PreconditionError("superposition_check requires p >= 2", std::nan(""));
    if (mode == Mode::Super && !(p >= 1.0 && p <= 2.0))
        throw PreconditionError("supersolution_difference_check requires 1 <= p <= 2", std::nan(""));

    const auto radii = profile_grid(ann, grid, {u, v});
    const Annulus box{radii.front(), radii.back()};
    const GridSpec spec{grid.nodes, radii.back(), std::numeric_limits<double>::infinity()};
    const auto cu = classify(params, u, V, box, spec);
    const auto cv = classify(params, v, V, box, spec);
    const Verdict u_need = mode == Mode::Sub ? Verdict::Subsolution : Verdict::Supersolution;
    const Verdict v_need = mode == Mode::Sub ? Verdict::Supersolution : Verdict::Subsolution;
    auto status_ok = [](const ClassificationReport& c, Verdict need) {
        return (c.verdict == need || c.verdict == Verdict::Solution) && holds_on_whole_grid(c);
    };
    if (!status_ok(cu, u_need))
        throw PreconditionError(std::string("u must be a ") + to_string(u_need) + " on the annulus, got " +
                                    to_string(cu.verdict),
                                cu.rho0);
    if (!status_ok(cv, v_need))
        throw PreconditionError(std::string("v must be a ") + to_string(v_need) + " on the annulus, got " +
                                    to_string(cv.verdict),
                                cv.rho0);

    DifferenceReport rep{};
    rep.expected = mode == Mode::Sub ? Verdict::Subsolution : Verdict::Supersolution;
    int dir = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (double r : radii) {
        const Jet ju = u.jet(r);
        const Jet jv = v.jet(r);
        if (!(jv.u > 0.0)) throw PreconditionError("v must be positive", r);
        if (jv.u > ju.u) throw PreconditionError("ordering v <= u fails", r);
        const int s = jv.du < 0.0 ? -1 : (jv.du > 0.0 ? 1 : 0);
        if (s == 0) throw PreconditionError("v' vanishes", r);
        if (dir == 0) dir = s;
        if (s != dir) throw PreconditionError("v' changes sign", r);
        const double diff = ju.du - jv.du;
        const bool tie = std::fabs(diff) <= kGradientTieRel * (std::fabs(ju.du) + std::fabs(jv.du));
        // Decreasing case needs u' <= v', increasing case u' >= v'.
        const bool ordered = tie || (dir < 0 ? diff < 0.0 : diff > 0.0);
        if (!ordered) throw PreconditionError("derivative ordering between u' and v' fails", r);
        if (mode == Mode::Super && tie)
            throw PreconditionError("strict derivative ordering fails (u' = v')", r);

        const Jet jw{ju.u - jv.u, ju.du - jv.du, ju.d2u - jv.d2u};
        const double vr = V(params, r);
        double res, scaled;
        if (tie) {
            ++rep.degenerate_nodes;
            const double pot = vr * signed_pow(jw.u, p - 1.0);
            res = -pot;
            scaled = res / (std::fabs(pot) + 1e-300);
        } else {
            const auto parts = residual_parts(params, jw, vr, r);
            res = parts.residual;
            scaled = parts.scaled();
        }
        rep.evidence.push_back({r, jw.u, jw.du, res, scaled});
        const double adverse = mode == Mode::Sub ? scaled : -scaled;
        if (adverse > kDeadBand) ++rep.violations;
        if (adverse > worst) {
            worst = adverse;
            rep.worst_scaled = scaled;
            rep.worst_radius = r;
        }
    }
    rep.holds = rep.violations == 0;
    return rep;
}

} // namespace

DifferenceReport superposition_check(const Params& params, const Profile& u, const Profile& v, const Potential& V,
                                     const Annulus& ann, const GridSpec& grid) {
    return difference_check(params, u, v, V, ann, grid, Mode::Sub);
}

DifferenceReport supersolution_difference_check(const Params& params, const Profile& u, const Profile& v,
                                                const Potential& V, const Annulus& ann, const GridSpec& grid) {
    return difference_check(params, u, v, V, ann, grid, Mode::Super);
}

double admissible_scale(const Profile& u, const Profile& v, const std::vector<double>& radii) {
    double s = std::numeric_limits<double>::infinity();
    for (double r : radii) {
        const Jet ju = u.jet(r);
        const Jet jv = v.jet(r);
        const double gr = ju.du / jv.du;
        if (!(jv.u > 0.0) || !(gr > 0.0))
            throw PreconditionError("u and v must be positive with derivatives of one sign", r);
        s = std::min({s, ju.u / jv.u, gr});
    }
    return 0.99 * s;
}

} // namespace plh
