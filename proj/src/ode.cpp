#include "plh/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace plh {

const char* to_string(Monotonicity m) {
    switch (m) {
    case Monotonicity::Decreasing: return "Decreasing";
    case Monotonicity::Increasing: return "Increasing";
    case Monotonicity::Constant: return "Constant";
    case Monotonicity::NonMonotone: return "NonMonotone";
    }
    return "?";
}

const char* to_string(StopReason s) {
    switch (s) {
    case StopReason::Reached: return "Reached";
    case StopReason::PhiNonPositive: return "PhiNonPositive";
    case StopReason::GradientSignChange: return "GradientSignChange";
    }
    return "?";
}

double radial_second_derivative(const Params& params, double v_at_r, double r, double phi, double dphi) {
    const double p = params.p();
    const double pot = v_at_r * signed_pow(phi, p - 1.0);
    double L;
    if (p == 2.0) {
        L = -pot;
    } else if (dphi == 0.0) {
        if (p < 2.0 || pot == 0.0)
            L = 0.0;
        else
            L = -std::copysign(std::numeric_limits<double>::infinity(), pot);
    } else {
        L = -pot * std::pow(std::fabs(dphi), 2.0 - p);
    }
    return (L - (params.dim() - 1.0) * dphi / r) / (p - 1.0);
}

namespace {

double flux_of(const Params& params, double r, double dphi) {
    const double p = params.p();
    return std::pow(r, params.dim() - 1.0) * signed_pow(dphi, p - 1.0);
}

double dphi_of(const Params& params, double r, double w) {
    return signed_pow(w / std::pow(r, params.dim() - 1.0), 1.0 / (params.p() - 1.0));
}

// Quintic Hermite basis on s in [0, 1]: values and first derivatives.
struct Hermite5 {
    std::array<double, 6> h;
    std::array<double, 6> dh;
};

Hermite5 hermite5(double s) {
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    Hermite5 b{};
    b.h = {1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5,
           s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5,
           0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5),
           10.0 * s3 - 15.0 * s4 + 6.0 * s5,
           -4.0 * s3 + 7.0 * s4 - 3.0 * s5,
           0.5 * (s3 - 2.0 * s4 + s5)};
    b.dh = {-30.0 * s2 + 60.0 * s3 - 30.0 * s4,
            1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4,
            0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4),
            30.0 * s2 - 60.0 * s3 + 30.0 * s4,
            -12.0 * s2 + 28.0 * s3 - 15.0 * s4,
            0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4)};
    return b;
}

} // namespace

Jet Trajectory::jet(double radius) const {
    if (r.empty()) fail(ErrorKind::DomainError, "empty trajectory");
    if (!(radius >= r.front() && radius <= r.back()))
        fail(ErrorKind::DomainError, "radius " + std::to_string(radius) + " outside the trajectory range [" +
                                         std::to_string(r.front()) + ", " + std::to_string(r.back()) + "]");
    auto it = std::lower_bound(r.begin(), r.end(), radius);
    auto i = static_cast<std::size_t>(it - r.begin());
    if (it != r.end() && *it == radius) return {phi[i], dphi[i], d2phi[i]};
    const std::size_t a = i - 1, b = i;

    // Derivatives with respect to t = log r.
    const double t0 = std::log(r[a]), t1 = std::log(r[b]);
    const double h = t1 - t0;
    const double s = (std::log(radius) - t0) / h;
    const double y0 = phi[a], y1 = phi[b];
    const double yt0 = r[a] * dphi[a], yt1 = r[b] * dphi[b];
    const double ytt0 = yt0 + r[a] * r[a] * d2phi[a];
    const double ytt1 = yt1 + r[b] * r[b] * d2phi[b];
    const auto B = hermite5(s);
    const double u = B.h[0] * y0 + h * B.h[1] * yt0 + h * h * B.h[2] * ytt0 + B.h[3] * y1 + h * B.h[4] * yt1 +
                     h * h * B.h[5] * ytt1;
    const double ut = (B.dh[0] * y0 + h * B.dh[1] * yt0 + h * h * B.dh[2] * ytt0 + B.dh[3] * y1 +
                       h * B.dh[4] * yt1 + h * h * B.dh[5] * ytt1) /
                      h;
    const double du = ut / radius;
    return {u, du, radial_second_derivative(params, V(params, radius), radius, u, du)};
}

void Trajectory::finalize() {
    const std::size_t n = r.size();
    flux.resize(n);
    local_exponent.resize(n);
    bool any_pos = false, any_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        flux[i] = flux_of(params, r[i], dphi[i]);
        local_exponent[i] = r[i] * dphi[i] / phi[i];
        any_pos = any_pos || dphi[i] > 0.0;
        any_neg = any_neg || dphi[i] < 0.0;
    }
    if (any_pos && any_neg)
        monotone = Monotonicity::NonMonotone;
    else if (any_pos)
        monotone = Monotonicity::Increasing;
    else if (any_neg)
        monotone = Monotonicity::Decreasing;
    else
        monotone = Monotonicity::Constant;
}

Trajectory Trajectory::from_family(const Params& params, const Potential& V, const RadialFamily& u, double r0,
                                   double r1, int nodes) {
    Trajectory tr;
    tr.params = params;
    tr.V = V;
    tr.r = geometric_grid(r0, r1, nodes);
    for (double x : tr.r) {
        const Jet j = u.jet(x);
        tr.phi.push_back(j.u);
        tr.dphi.push_back(j.du);
        tr.d2phi.push_back(j.d2u);
    }
    tr.finalize();
    return tr;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

using State = std::array<double, 2>;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [c, k] : terms) {
        out[0] += h * c * (*k)[0];
        out[1] += h * c * (*k)[1];
    }
    return out;
}

} // namespace

Trajectory integrate(const Params& params, const Potential& V, double r0, double phi0, double dphi0, double r_max,
                     const IntegrateOptions& opts) {
    params.require_p_above_one("integrate");
    const double p = params.p();
    const double n = params.dim();
    if (!(std::isfinite(r0) && r0 > 0.0)) fail(ErrorKind::DomainError, "r0 must be > 0");
    if (!(std::isfinite(r_max) && r_max > r0)) fail(ErrorKind::DomainError, "r_max must exceed r0");
    if (!(std::isfinite(phi0) && phi0 > 0.0)) fail(ErrorKind::DomainError, "phi0 must be > 0");
    if (!std::isfinite(dphi0)) fail(ErrorKind::DomainError, "dphi0 must be finite");
    if (dphi0 == 0.0 && p > 2.0)
        fail(ErrorKind::GradientDegenerate, "dphi0 = 0 is singular for p > 2");
    // Both ends must lie where V is defined; V reports DomainError otherwise.
    (void)V(params, r0);
    (void)V(params, r_max);
    if (!(opts.tol > 0.0)) fail(ErrorKind::DomainError, "tol must be > 0");

    const double t0 = std::log(r0);
    const double t_end = std::log(r_max);
    const double span = t_end - t0;
    const double max_dt = opts.max_dt > 0.0 ? opts.max_dt : span / 64.0;

    auto rhs = [&](double t, const State& y) -> State {
        const double r = std::exp(t);
        const double dphi = dphi_of(params, r, y[1]);
        return {r * dphi, -std::pow(r, n) * V(params, r) * signed_pow(y[0], p - 1.0)};
    };

    Trajectory tr;
    tr.params = params;
    tr.V = V;
    auto push = [&](double r, const State& y) {
        const double dphi = dphi_of(params, r, y[1]);
        tr.r.push_back(r);
        tr.phi.push_back(y[0]);
        tr.dphi.push_back(dphi);
        tr.d2phi.push_back(radial_second_derivative(params, V(params, r), r, y[0], dphi));
    };

    State y{phi0, flux_of(params, r0, dphi0)};
    tr.r.push_back(r0);
    tr.phi.push_back(phi0);
    tr.dphi.push_back(dphi0);
    tr.d2phi.push_back(radial_second_derivative(params, V(params, r0), r0, phi0, dphi0));

    double t = t0;
    const bool fixed = opts.fixed_dt > 0.0;
    double dt = fixed ? opts.fixed_dt : std::min(max_dt, 1e-3 * std::max(span, 1e-3));
    double err_prev = 1.0;
    bool rejected_last = false;
    State k1 = rhs(t, y);

    constexpr double kSafety = 0.9, kAlpha = 0.17, kBeta = 0.04, kFacMin = 0.2, kFacMax = 10.0;
    for (int step = 0;; ++step) {
        if (step >= opts.max_steps) fail(ErrorKind::ToleranceFailure, "step budget exhausted");
        bool last = false;
        if (t + dt >= t_end - 1e-9 * dt) {
            dt = t_end - t;
            last = true;
        }
        if (dt <= 1e-14 * std::max(1.0, std::fabs(t)))
            fail(ErrorKind::ToleranceFailure, "step size underflow at r = " + std::to_string(std::exp(t)));

        const State k2 = rhs(t + c2 * dt, axpy(y, dt, {{a21, &k1}}));
        const State k3 = rhs(t + c3 * dt, axpy(y, dt, {{a31, &k1}, {a32, &k2}}));
        const State k4 = rhs(t + c4 * dt, axpy(y, dt, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State k5 = rhs(t + c5 * dt, axpy(y, dt, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State k6 = rhs(t + dt, axpy(y, dt, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State yn = axpy(y, dt, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const double t_new = last ? t_end : t + dt;
        const State k7 = rhs(t_new, yn);

        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double e = dt * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = opts.atol + opts.tol * std::max(std::fabs(y[i]), std::fabs(yn[i]));
            err = std::max(err, std::fabs(e) / sc);
        }
        if (fixed && std::isfinite(err)) err = 0.0;
        if (!std::isfinite(err)) {
            if (!std::isfinite(yn[0]) || !std::isfinite(yn[1]) || std::fabs(yn[0]) > 1e300 || std::fabs(yn[1]) > 1e300)
                fail(ErrorKind::Blowup, "solution exceeded 1e300 near r = " + std::to_string(std::exp(t_new)));
            err = 1e10;
        }

        if (err <= 1.0) {
            if (std::fabs(yn[0]) > 1e300 || std::fabs(yn[1]) > 1e300)
                fail(ErrorKind::Blowup, "solution exceeded 1e300 at r = " + std::to_string(std::exp(t_new)));
            if (yn[0] <= 0.0) {
                tr.stop = StopReason::PhiNonPositive;
                break;
            }
            if (y[1] != 0.0 && (yn[1] == 0.0 || std::signbit(yn[1]) != std::signbit(y[1]))) {
                tr.stop = StopReason::GradientSignChange;
                break;
            }
            ++tr.accepted_steps;
            t = t_new;
            y = yn;
            k1 = k7;
            push(last ? r_max : std::exp(t), y);
            if (last) break;
            if (fixed) continue;
            double fac = kSafety * std::pow(err, -kAlpha) * std::pow(err_prev, kBeta);
            fac = std::clamp(fac, kFacMin, rejected_last ? 1.0 : kFacMax);
            dt = std::min(dt * fac, max_dt);
            err_prev = std::max(err, 1e-4);
            rejected_last = false;
        } else {
            ++tr.rejected_steps;
            const double fac = std::max(kFacMin, kSafety * std::pow(err, -kAlpha));
            dt *= fac;
            rejected_last = true;
        }
    }
    tr.finalize();
    return tr;
}

double decay_fit(const Trajectory& traj, double r_lo, double r_hi) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.r[i] < r_lo || traj.r[i] > r_hi) continue;
        if (!(traj.phi[i] > 0.0)) fail(ErrorKind::DomainError, "decay_fit needs phi > 0 on the window");
        const double x = std::log(traj.r[i]);
        const double y = std::log(traj.phi[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < kMinFitNodes)
        fail(ErrorKind::InsufficientWindow,
             "window holds " + std::to_string(m) + " nodes, need " + std::to_string(kMinFitNodes));
    const double mx = sx / m;
    const double den = sxx - m * mx * mx;
    if (!(den > 0.0)) fail(ErrorKind::InsufficientWindow, "window has no spread in log r");
    return (sxy - mx * sy) / den;
}

double decay_fit(const Trajectory& traj) {
    if (traj.r.empty()) fail(ErrorKind::InsufficientWindow, "empty trajectory");
    return decay_fit(traj, traj.r.front(), traj.r.back());
}

} // namespace plh
