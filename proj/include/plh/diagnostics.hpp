#pragma once

#include <utility>
#include <vector>

#include "plh/profile.hpp"

namespace plh {

enum class RatioTrend { VanishingMonotone, Vanishing, BoundedAway, Oscillating };
const char* to_string(RatioTrend t);

/// Finite-horizon picture of u/w along a geometric grid.
///
/// `tail_log_slope` is the fitted d log(u/w) / d log log r over the last
/// quarter of the samples: about -b for (log r)^{-b}, about -c log r for
/// r^{-c}, and close to zero when the ratio levels off.
struct RatioDiagnostic {
    std::vector<std::pair<double, double>> ratios;
    RatioTrend trend;
    double limsup_estimate;  ///< max of u/w over the tail quarter
    double max_ratio;        ///< max over the whole grid: candidate constant in u <= C w
    double r1;               ///< start of the non-increasing tail (+inf if none)
    double tail_log_slope;
    double horizon;          ///< last sampled radius
    bool finite_horizon = true;
    bool supports_domination;      ///< u <= C w, u = o(w)
    bool supports_non_smallness;   ///< limsup u/w > 0
};

inline constexpr double kDefaultHorizon = 1e8;

/// The ratio counts as vanishing when tail_log_slope <= -kVanishingSlope.
inline constexpr double kVanishingSlope = 1e-3;

/// Samples u/w on [ann.r0, min(ann.R0, horizon, domain ends)].
RatioDiagnostic pl_alternative(const Params& params, const Profile& u, const Profile& w, const Annulus& ann,
                               double horizon = kDefaultHorizon, int nodes = 512);

enum class CriticalKind { LocalMin, LocalMax, Flat };
const char* to_string(CriticalKind k);

struct QuotientCritical {
    double r;            ///< refined location of the sign change of (u/v)'
    CriticalKind kind;
    double second_diff;  ///< q(r+h) - 2 q(r) + q(r-h), h = 1e-4 r
};

struct QuotientScanReport {
    Verdict u_verdict;
    Verdict v_verdict;
    bool u_strict;
    bool v_strict;
    std::vector<QuotientCritical> criticals;
    int interior_maxima = 0;
    bool monotone = true;  ///< (u/v)' keeps one sign on the grid
    int derivative_sign = 0;
};

/// Looks for interior local maxima of u/v on the annulus. Requires u a
/// strictly monotone subsolution and v a strictly monotone supersolution on
/// the whole grid, at least one of them strict; PreconditionViolated otherwise.
QuotientScanReport quotient_extrema_scan(const Params& params, const Profile& u, const Profile& v,
                                         const Potential& V, const Annulus& ann, const GridSpec& grid = {});

} // namespace plh
