#include "plh/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "plh/roots.hpp"

namespace plh {
namespace {

constexpr double kTiny = std::numeric_limits<double>::min();

bool is_degenerate(double lower, double upper) {
    return std::fabs(upper - lower) <= kDegenerateRel * (1.0 + std::fabs(lower));
}

// Validates a strength against [0, critical] and clamps values that exceed
// the critical constant by floating-point noise.
double admit_strength(double value, double critical, const char* name) {
    if (!std::isfinite(value) || value < 0.0)
        fail(ErrorKind::DomainError, std::string(name) + " must be >= 0, got " + std::to_string(value));
    if (value > critical * (1.0 + kCriticalClampRel))
        fail(ErrorKind::DomainError, std::string(name) + " = " + std::to_string(value) +
                                         " exceeds its critical value " + std::to_string(critical));
    return std::min(value, critical);
}

ExponentPair make_pair(double a, double b) {
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    return {lo, hi, is_degenerate(lo, hi)};
}

} // namespace

double lambda_of_alpha(const Params& params, double alpha) {
    const double p = params.p();
    // alpha |alpha|^{p-2} grouped as sign(alpha)|alpha|^{p-1}: finite at 0 for p < 2.
    return signed_pow(alpha, p - 1.0) * (p - params.dim() - (p - 1.0) * alpha);
}

double critical_hardy(const Params& params) {
    return std::pow(std::fabs(params.critical_alpha()), params.p());
}

double c_star(const Params& params) {
    const double p = params.p();
    if (params.critical_dimension()) {
        const double n = params.dim();
        return std::pow((n - 1.0) / n, n);
    }
    return (p - 1.0) / (2.0 * p) * std::pow(std::fabs(params.critical_alpha()), p - 2.0);
}

HardyConstants hardy_constants(const Params& params) {
    return {critical_hardy(params), c_star(params), params.log_power()};
}

double hardy_residual(const Params& params, double alpha, double lambda) {
    return std::fabs(lambda_of_alpha(params, alpha) - lambda) / std::max(std::fabs(lambda), kTiny);
}

ExponentPair hardy_roots(const Params& params, double lambda) {
    if (params.critical_dimension()) {
        if (!std::isfinite(lambda) || lambda < 0.0)
            fail(ErrorKind::DomainError, "lambda must be >= 0");
        if (lambda > 0.0)
            fail(ErrorKind::DegenerateDimension, "p = N forces C_H = 0; no roots for lambda > 0");
        return {0.0, 0.0, true};
    }
    const double ch = critical_hardy(params);
    lambda = admit_strength(lambda, ch, "lambda");

    const double peak = params.critical_alpha();
    const double extreme = params.extreme_alpha();
    if (lambda == 0.0) return make_pair(extreme, 0.0);
    if (lambda == ch) return {peak, peak, true};

    // lambda_of_alpha increases up to `peak` and decreases after it, so each
    // branch holds exactly one root.
    auto f = [&](double a) { return lambda_of_alpha(params, a) - lambda; };
    if (f(peak) <= 0.0) return {peak, peak, true};
    const double left = roots::bracketed(f, std::min(extreme, 0.0), peak).x;
    const double right = roots::bracketed(f, peak, std::max(extreme, 0.0)).x;
    return make_pair(left, right);
}

double improved_lhs(const Params& params, double beta) {
    const double p = params.p();
    if (params.critical_dimension()) {
        const double n = params.dim();
        return (n - 1.0) * (1.0 - beta) * signed_pow(beta, n - 1.0);
    }
    const double k = std::pow(std::fabs(params.critical_alpha()), p - 2.0);
    return 0.5 * k * (p - 1.0) * (2.0 - beta * p) * beta;
}

double improved_residual(const Params& params, double beta, double epsilon) {
    return std::fabs(improved_lhs(params, beta) - epsilon) / std::max(std::fabs(epsilon), kTiny);
}

ExponentPair improved_roots(const Params& params, double epsilon) {
    const double cs = c_star(params);
    epsilon = admit_strength(epsilon, cs, "epsilon");
    const double p = params.p();

    if (params.critical_dimension()) {
        const double n = params.dim();
        const double peak = (n - 1.0) / n;
        if (epsilon == 0.0) return {0.0, 1.0, false};
        if (epsilon == cs) return {peak, peak, true};
        auto f = [&](double b) { return improved_lhs(params, b) - epsilon; };
        if (f(peak) <= 0.0) return {peak, peak, true};
        return make_pair(roots::bracketed(f, 0.0, peak).x, roots::bracketed(f, peak, 1.0).x);
    }

    if (epsilon == 0.0) return {0.0, 2.0 / p, false};
    if (epsilon == cs) return {1.0 / p, 1.0 / p, true};
    // p beta^2 - 2 beta + (epsilon / C_*) / p = 0; the small root is taken
    // from the product of roots to avoid cancellation.
    const double ratio = epsilon / cs;
    const double s = std::sqrt(std::max(0.0, 1.0 - ratio));
    const double upper = (1.0 + s) / p;
    const double lower = ratio / (p * (1.0 + s));
    return make_pair(lower, upper);
}

double mu_of_beta(const Params& params, double beta) {
    const double p = params.p();
    return (p - 1.0) * signed_pow(beta, p - 1.0) * (1.0 - beta);
}

ExponentPair rescaled_roots(const Params& params, double lambda) {
    if (params.critical_dimension())
        fail(ErrorKind::DegenerateDimension, "rescaled exponents are undefined for p = N");
    const double ch = critical_hardy(params);
    lambda = admit_strength(lambda, ch, "lambda");

    const double p = params.p();
    const double peak = (p - 1.0) / p;
    if (lambda == 0.0) return {0.0, 1.0, false};
    if (lambda == ch) return {peak, peak, true};

    const double mu_peak = std::pow(peak, p);
    const double target =
        std::min(std::pow(std::fabs((p - 1.0) / (p - params.dim())), p) * lambda, mu_peak);
    auto f = [&](double b) { return mu_of_beta(params, b) - target; };
    if (f(peak) <= 0.0) return {peak, peak, true};
    return make_pair(roots::bracketed(f, 0.0, peak).x, roots::bracketed(f, peak, 1.0).x);
}

} // namespace plh
