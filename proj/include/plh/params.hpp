#pragma once

#include <cmath>
#include <string>

#include "plh/errors.hpp"

namespace plh {

/// Exponent of the p-Laplacian and space dimension.
///
/// Construction only enforces p >= 1 and N >= 2; operations that need a
/// stronger condition (p > 1, p >= 2, 1 <= p <= 2) check it themselves.
class Params {
public:
    Params(double p, int N) : p_(p), N_(N) {
        if (!(std::isfinite(p) && p >= 1.0))
            fail(ErrorKind::DomainError, "p must be finite and >= 1, got " + std::to_string(p));
        if (N < 2)
            fail(ErrorKind::DomainError, "N must be >= 2, got " + std::to_string(N));
    }

    double p() const noexcept { return p_; }
    int N() const noexcept { return N_; }
    double dim() const noexcept { return static_cast<double>(N_); }

    /// True when p coincides with the dimension (the log-critical case).
    bool critical_dimension() const noexcept { return p_ == dim(); }

    /// (p - N) / p, the argmax of the Hardy exponent map.
    double critical_alpha() const noexcept { return (p_ - dim()) / p_; }

    /// (p - N) / (p - 1): the nonzero root of the exponent map at lambda = 0.
    double extreme_alpha() const noexcept { return (p_ - dim()) / (p_ - 1.0); }

    /// m_* of the improved potential.
    int log_power() const noexcept { return critical_dimension() ? N_ : 2; }

    void require_p_at_least(double bound, const char* op) const {
        if (p_ < bound)
            fail(ErrorKind::DomainError,
                 std::string(op) + " requires p >= " + std::to_string(bound) + ", got p = " + std::to_string(p_));
    }

    void require_p_above_one(const char* op) const {
        if (!(p_ > 1.0)) fail(ErrorKind::DomainError, std::string(op) + " requires p > 1");
    }

private:
    double p_;
    int N_;
};

/// sign(x) * |x|^e, finite at x = 0 for every e > 0.
inline double signed_pow(double x, double e) {
    if (x == 0.0) return 0.0;
    return std::copysign(std::pow(std::fabs(x), e), x);
}

} // namespace plh
