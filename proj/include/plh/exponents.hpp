#pragma once

#include "plh/params.hpp"

namespace plh {

/// Critical constants of the Hardy and improved-Hardy potentials.
struct HardyConstants {
    double c_h;     ///< |(p-N)/p|^p, zero iff p = N
    double c_star;  ///< critical strength of the logarithmic correction
    int m_star;     ///< log power of the correction: 2 if p != N, N if p = N
};

/// Ordered pair of exponent roots.
struct ExponentPair {
    double lower;
    double upper;
    bool degenerate;
};

/// Relative slack above a critical constant that is still clamped onto it.
inline constexpr double kCriticalClampRel = 1e-12;

/// |upper - lower| <= kDegenerateRel * (1 + |lower|) marks a double root.
inline constexpr double kDegenerateRel = 1e-10;

/// alpha |alpha|^{p-2} (p - N - (p-1) alpha): the Hardy strength for which
/// r^alpha solves the pure Hardy equation.
double lambda_of_alpha(const Params& params, double alpha);

double critical_hardy(const Params& params);
double c_star(const Params& params);
HardyConstants hardy_constants(const Params& params);

/// Both solutions of lambda_of_alpha(alpha) = lambda for 0 <= lambda <= C_H.
///
/// Throws DegenerateDimension when p = N and lambda > 0, DomainError when
/// lambda is negative or exceeds C_H by more than the clamp slack.
ExponentPair hardy_roots(const Params& params, double lambda);

/// Left-hand side of the improved-Hardy exponent equation at beta.
double improved_lhs(const Params& params, double beta);

/// Both solutions of improved_lhs(beta) = epsilon for 0 <= epsilon <= C_*.
ExponentPair improved_roots(const Params& params, double epsilon);

/// (p-1) beta |beta|^{p-2} (1 - beta): the Hardy map after rescaling
/// alpha = beta (p-N)/(p-1).
double mu_of_beta(const Params& params, double beta);

/// Rescaled roots (beta_2, beta_1) with mu = |(p-1)/(p-N)|^p lambda;
/// lower lies in [0, (p-1)/p], upper in [(p-1)/p, 1]. Requires p != N.
ExponentPair rescaled_roots(const Params& params, double lambda);

/// |lambda_of_alpha(alpha) - lambda| / max(lambda, tiny).
double hardy_residual(const Params& params, double alpha, double lambda);
double improved_residual(const Params& params, double beta, double epsilon);

} // namespace plh
