#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plh/profile.hpp"

namespace plh {

/// Radial two-point problem on a finite annulus.
struct BvpProblem {
    Params params;
    Potential V;
    Annulus ann;   ///< R0 must be finite
    double inner;  ///< value at r0
    double outer;  ///< value at R0

    void validate() const;
};

struct BvpOptions {
    double tol = 1e-10;           ///< boundary hit: |phi(R0) - outer| <= tol (1 + |outer|)
    double integrator_tol = 1e-12;
    int scan_slopes = 64;
    int max_iterations = 200;
};

struct BvpSolution {
    Trajectory trajectory;
    double dphi0;
    double boundary_residual;  ///< |phi(R0) - outer|
    int iterations;
};

/// Shooting on the initial slope. Decreasing data scan 64 slopes
/// geometrically over [-|phi0| 1e3 / r0, -|phi0| 1e-6 / r0]; increasing data
/// use the mirrored range. NoBracket when no slope pair straddles the target.
BvpSolution solve_bvp(const BvpProblem& prob, const BvpOptions& opts = {});

/// Condition (*) witness: a positive supersolution that is not a solution.
struct Certificate {
    RadialFamily w;
    std::string origin;  ///< "given" or a short catalog label
    ClassificationReport report;
};

/// Searches the closed-form catalog for a strict supersolution on the annulus:
/// r^beta between the Hardy roots, the log-corrected critical members and a
/// scan of pure powers. Returns nothing when no candidate qualifies.
std::optional<Certificate> find_certificate(const Params& params, const Potential& V, const Annulus& ann,
                                            const GridSpec& grid = {});

struct ComparisonReport {
    Verdict u_verdict;
    Verdict v_verdict;
    Certificate certificate;
    bool holds;
    int violations = 0;
    double worst_excess = 0.0;  ///< max (u - v) / (u + v) over the grid
    double worst_radius = 0.0;
    std::vector<std::pair<double, double>> violation_nodes;  ///< (r, u - v)
};

/// Checks u <= v + 1e-9 (u + v) on the grid under the comparison hypotheses:
/// u a subsolution, v a nonnegative supersolution, u <= v on both boundary
/// spheres, and condition (*) certified by `certificate` or the catalog.
ComparisonReport comparison_verify(const Params& params, const Potential& V, const Annulus& ann, const Profile& u,
                                   const Profile& v, const GridSpec& grid = {},
                                   const std::optional<RadialFamily>& certificate = std::nullopt);

enum class GrowthRegime {
    NonIncreasing,           ///< u/v non-increasing on the whole sampled range
    EventuallyNonDecreasing, ///< u/v non-decreasing from rho_star on
    Constant,                ///< both of the above
    Undetermined,
};
const char* to_string(GrowthRegime g);

struct GrowthReport {
    GrowthRegime regime;
    double rho_star;  ///< start of the non-decreasing tail (+inf if none)
    bool non_increasing;
    bool eventually_non_decreasing;
    std::vector<std::pair<double, double>> quotient;  ///< (r, (u/u(r0)) / (v/v(r0)))
};

/// For p >= 2 and increasing u (subsolution) and v (strict supersolution),
/// decides which monotonicity regime the normalized quotient follows.
GrowthReport growth_dichotomy_check(const Params& params, const Potential& V, const Profile& u, const Profile& v,
                                    const Annulus& ann, const GridSpec& grid = {});

inline constexpr double kComparisonBand = 1e-9;

} // namespace plh
