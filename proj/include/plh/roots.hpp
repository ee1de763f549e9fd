#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "plh/errors.hpp"

namespace plh::roots {

struct Result {
    double x;
    double fx;
    int iterations;
};

/// Root of a continuous f on [lo, hi] with f(lo) and f(hi) of opposite sign
/// (or one of them zero).
///
/// Each iteration proposes a secant point from the current bracket and falls
/// back to bisection whenever that point lands outside the middle 90% of the
/// bracket or the bracket failed to halve over the previous two steps. The
/// loop runs until the bracket cannot shrink in double precision, so the
/// returned point is the bracket end with the smaller |f|.
///
/// `done(x, fx)` may end the search early once a point is good enough.
template <class F, class Done>
Result bracketed_until(F&& f, double lo, double hi, Done&& done, int max_iter = 400) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0 || done(lo, flo)) return {lo, flo, 0};
    if (fhi == 0.0 || done(hi, fhi)) return {hi, fhi, 0};
    if (std::signbit(flo) == std::signbit(fhi))
        fail(ErrorKind::NoBracket, "root not bracketed");

    int stalled = 0;
    int it = 0;
    for (; it < max_iter; ++it) {
        const double width = std::fabs(hi - lo);
        const double mid = lo + 0.5 * (hi - lo);
        if (mid == lo || mid == hi) break;

        double x = mid;
        const bool use_secant = stalled < 2 && flo != fhi;
        if (use_secant) {
            const double s = hi - fhi * (hi - lo) / (fhi - flo);
            const double margin = 0.05 * width;
            const double a = std::fmin(lo, hi) + margin;
            const double b = std::fmax(lo, hi) - margin;
            if (std::isfinite(s) && s > a && s < b) x = s;
        }

        const double fx = f(x);
        if (fx == 0.0 || done(x, fx)) return {x, fx, it + 1};
        if (std::signbit(fx) == std::signbit(flo)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if (x == mid)
            stalled = 0;
        else if (std::fabs(hi - lo) > 0.5 * width)
            ++stalled;
        else
            stalled = 0;
    }
    return std::fabs(flo) <= std::fabs(fhi) ? Result{lo, flo, it} : Result{hi, fhi, it};
}

template <class F>
Result bracketed(F&& f, double lo, double hi, int max_iter = 400) {
    return bracketed_until(std::forward<F>(f), lo, hi, [](double, double) { return false; }, max_iter);
}

} // namespace plh::roots
