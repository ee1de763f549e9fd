#pragma once

#include <cstdint>
#include <vector>

#include "plh/profile.hpp"

namespace plh {

/// a, b >= 0; c, d > 0; q > 0.
struct Quadruple {
    double a;
    double b;
    double c;
    double d;
    double q;

    void validate() const;
};

struct GapParts {
    double gap;    ///< a^q/c^{q-1} + b^q/d^{q-1} - (a+b)^q/(c+d)^{q-1}
    double scale;  ///< |lhs| + |rhs|
    /// gap / scale, computed without forming either when they overflow.
    double relative;
};

/// Right side minus left side of the convexity inequality. Nonnegative for
/// q >= 1, nonpositive for 0 < q <= 1, zero iff q = 1 or ad = bc.
double convexity_gap(const Quadruple& quad);

/// Gap together with its scale. Powers switch to log space when any base
/// leaves [1e-100, 1e100].
GapParts convexity_gap_parts(const Quadruple& quad);

struct InequalitySuiteReport {
    std::uint64_t seed;
    int samples;
    double q_min;
    double q_max;
    int sign_violations = 0;      ///< signed-gap contract broken beyond 1e-12 scale
    int equality_checked = 0;
    int equality_violations = 0;  ///< |gap| > 1e-10 scale although ad = bc
    int strict_checked = 0;
    int strict_violations = 0;    ///< gap <= 1e-6 scale although q >= 1.5, |ad-bc| >= 0.1 (ad+bc)
    double worst_sign_excess = 0.0;
    bool passed() const { return sign_violations == 0 && equality_violations == 0 && strict_violations == 0; }
};

/// Random quadruples with q uniform in [q_min, q_max]; a, b, c, d
/// log-uniform in [0.1, 10] with about 2% exact zeros for a and b.
InequalitySuiteReport inequality_suite(double q_min, double q_max, int samples, std::uint64_t seed);

/// Result of checking the difference w = u - v of an ordered pair.
struct DifferenceReport {
    Verdict expected;            ///< Subsolution (p >= 2) or Supersolution (1 <= p <= 2)
    bool holds;                  ///< no node violates `expected` beyond the dead-band
    int violations = 0;
    int degenerate_nodes = 0;    ///< u' = v' handled by the potential-only branch
    double worst_scaled = 0.0;   ///< most adverse scaled residual
    double worst_radius = 0.0;
    std::vector<EvidencePoint> evidence;
};

/// Superposition: for p >= 2, 0 < v <= u, u' <= v' < 0 (or u' >= v' > 0),
/// u a subsolution and v a supersolution, u - v is a subsolution.
/// PreconditionViolated names the first offending node.
DifferenceReport superposition_check(const Params& params, const Profile& u, const Profile& v, const Potential& V,
                                     const Annulus& ann, const GridSpec& grid = {});

/// Companion statement for 1 <= p <= 2: with u' < v' < 0 (or u' > v' > 0)
/// strictly, u a supersolution and v a subsolution, u - v is a supersolution.
DifferenceReport supersolution_difference_check(const Params& params, const Profile& u, const Profile& v,
                                                const Potential& V, const Annulus& ann, const GridSpec& grid = {});

/// Largest s (with a 1% margin) such that s v <= u and s v' is on the same
/// side of u' as required by the superposition hypotheses, i.e.
/// 0.99 * min over the grid of min(u / v, u' / v').
double admissible_scale(const Profile& u, const Profile& v, const std::vector<double>& radii);

/// |u' - v'| <= kGradientTieRel (|u'| + |v'|) counts as u' = v'.
inline constexpr double kGradientTieRel = 1e-12;

} // namespace plh
