#pragma once

#include <vector>

#include "plh/family.hpp"

namespace plh {

enum class Monotonicity { Decreasing, Increasing, Constant, NonMonotone };
const char* to_string(Monotonicity m);

/// Why integration ended.
enum class StopReason {
    Reached,             ///< arrived at r_max
    PhiNonPositive,      ///< the next step would have made phi <= 0
    GradientSignChange,  ///< the flux (hence phi') changed sign
};
const char* to_string(StopReason s);

/// Radial solution produced by `integrate` (or sampled from a closed form).
///
/// Node data are exact integrator output; between nodes phi is a quintic
/// Hermite interpolant in t = log r, and phi'' is recovered from the
/// equation itself so the jet stays consistent with the ODE.
struct Trajectory {
    Params params{2.0, 2};
    Potential V;
    std::vector<double> r;
    std::vector<double> phi;
    std::vector<double> dphi;
    std::vector<double> d2phi;
    std::vector<double> flux;            ///< r^{N-1} |phi'|^{p-2} phi'
    std::vector<double> local_exponent;  ///< r phi' / phi
    Monotonicity monotone = Monotonicity::NonMonotone;
    StopReason stop = StopReason::Reached;
    int accepted_steps = 0;
    int rejected_steps = 0;

    std::size_t size() const { return r.size(); }
    double r_begin() const { return r.front(); }
    double r_end() const { return r.back(); }

    /// Interpolated jet; throws DomainError outside [r_begin, r_end].
    Jet jet(double radius) const;
    double value(double radius) const { return jet(radius).u; }

    /// Fills flux, local exponents and the monotonicity tag from r, phi, dphi.
    void finalize();

    /// Samples a closed-form family on a geometric grid (no integration).
    static Trajectory from_family(const Params& params, const Potential& V, const RadialFamily& u, double r0,
                                  double r1, int nodes = 512);
};

struct IntegrateOptions {
    double tol = 1e-9;       ///< relative tolerance per step
    double atol = 1e-300;    ///< absolute floor on both components
    double max_dt = 0.0;     ///< largest step in t; 0 means span / 64
    double fixed_dt = 0.0;   ///< > 0 disables error control and steps uniformly in t
    int max_steps = 2'000'000;
};

/// phi'' from the radial equation at (r, phi, phi'); V is the potential value.
/// Returns +-inf when phi' = 0 and p > 2 with a nonzero potential term.
double radial_second_derivative(const Params& params, double v_at_r, double r, double phi, double dphi);

/// Dormand-Prince 5(4) integration of
///   dphi/dt = r sign(w) (|w| / r^{N-1})^{1/(p-1)},   dw/dt = -r^N V phi^{p-1}
/// in t = log r, from r0 to r_max.
///
/// Requires p > 1, phi0 > 0, r_max > r0 and dphi0 != 0 when p > 2.
/// Errors: GradientDegenerate, Blowup (|phi| or |w| above 1e300),
/// ToleranceFailure (step underflow or step budget exhausted).
Trajectory integrate(const Params& params, const Potential& V, double r0, double phi0, double dphi0, double r_max,
                     const IntegrateOptions& opts = {});

/// Least-squares slope of log phi against log r over nodes in [r_lo, r_hi].
/// InsufficientWindow when fewer than 16 nodes fall inside.
double decay_fit(const Trajectory& traj, double r_lo, double r_hi);
double decay_fit(const Trajectory& traj);

inline constexpr int kMinFitNodes = 16;

} // namespace plh
