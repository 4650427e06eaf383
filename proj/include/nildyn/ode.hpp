#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "nildyn/tripoly.hpp"

namespace nildyn {

using Vec3 = std::array<double, 3>;

inline double vec_norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

inline Vec3 vec_add_scaled(const Vec3& a, double s, const Vec3& b) {
    return {a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
}

/// Thrown when the adaptive step size underflows; carries the last valid state.
class ode_error : public std::runtime_error {
public:
    ode_error(const std::string& what, double t, Vec3 y)
        : std::runtime_error(what), t_last(t), y_last(y) {}
    double t_last;
    Vec3 y_last;
};

/// One accepted step with the data needed for cubic Hermite dense output.
struct StepRecord {
    double t0 = 0, t1 = 0;
    Vec3 y0{}, y1{}, f0{}, f1{};

    Vec3 eval(double t) const {
        const double h = t1 - t0;
        const double s = (t - t0) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        Vec3 r{};
        for (int i = 0; i < 3; ++i)
            r[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
        return r;
    }
};

enum class Outcome { escaped_forward, escaped_backward, escaped_both, bounded_window, closed_orbit };

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::escaped_forward: return "escaped_forward";
        case Outcome::escaped_backward: return "escaped_backward";
        case Outcome::escaped_both: return "escaped_both";
        case Outcome::bounded_window: return "bounded_window";
        default: return "closed_orbit";
    }
}

struct IntegratorOptions {
    double tol = 1e-10; // used as both absolute and relative tolerance
    double escape_radius = 1e6;
    long max_steps = 20000000;
};

enum class StepControl { proceed, stop };

struct DirectionResult {
    double t_reached = 0;
    Vec3 y{};
    bool escaped = false;
};

/// Adaptive embedded Dormand-Prince 5(4) from t = 0 towards t_end (either
/// sign), FSAL, PI-free classic controller. The observer sees every accepted
/// step and may stop the run (event detection hooks in there).
template <class RHS, class Observer>
DirectionResult integrate_direction(RHS&& rhs, const Vec3& y_start, double t_end,
                                    const IntegratorOptions& opt, Observer&& observe) {
    static constexpr double A21 = 1.0 / 5;
    static constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
    static constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
    static constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                            A54 = -212.0 / 729;
    static constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                            A64 = 49.0 / 176, A65 = -5103.0 / 18656;
    static constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                            B5 = -2187.0 / 6784, B6 = 11.0 / 84;
    static constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                            E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

    DirectionResult res;
    res.y = y_start;
    if (t_end == 0) return res;
    const double dir = t_end > 0 ? 1.0 : -1.0;

    double t = 0;
    Vec3 y = y_start;
    Vec3 f = rhs(y);
    double h = dir * std::min(1e-3, std::fabs(t_end));

    for (long step = 0; step < opt.max_steps; ++step) {
        if ((t - t_end) * dir >= 0) break;
        if (std::fabs(h) > std::fabs(t_end - t)) h = t_end - t;
        if (std::fabs(h) < 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(t)))
            throw ode_error("step size underflow", t, y);

        const Vec3 k1 = f;
        const Vec3 k2 = rhs(vec_add_scaled(y, h * A21, k1));
        Vec3 tmp = y;
        for (int i = 0; i < 3; ++i) tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        const Vec3 k3 = rhs(tmp);
        for (int i = 0; i < 3; ++i) tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        const Vec3 k4 = rhs(tmp);
        for (int i = 0; i < 3; ++i)
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        const Vec3 k5 = rhs(tmp);
        for (int i = 0; i < 3; ++i)
            tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        const Vec3 k6 = rhs(tmp);
        Vec3 y_new{};
        for (int i = 0; i < 3; ++i)
            y_new[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        const Vec3 k7 = rhs(y_new); // FSAL

        double err = 0;
        for (int i = 0; i < 3; ++i) {
            const double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                                  E7 * k7[i]);
            const double sc = opt.tol + opt.tol * std::max(std::fabs(y[i]), std::fabs(y_new[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / 3.0);

        if (err <= 1.0 || !std::isfinite(err)) {
            if (!std::isfinite(err) || !std::isfinite(vec_norm(y_new))) {
                // A non-finite trial at huge states counts as escape.
                res.escaped = true;
                res.t_reached = t;
                res.y = y;
                return res;
            }
            StepRecord rec{t, t + h, y, y_new, k1, k7};
            t += h;
            y = y_new;
            f = k7;
            if (observe(rec) == StepControl::stop) {
                res.t_reached = t;
                res.y = y;
                return res;
            }
            if (vec_norm(y) >= opt.escape_radius) {
                res.escaped = true;
                res.t_reached = t;
                res.y = y;
                return res;
            }
        }
        const double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
    res.t_reached = t;
    res.y = y;
    return res;
}

struct Trajectory {
    std::vector<std::pair<double, Vec3>> samples; // strictly increasing t
    double H_drift = 0.0;                         // max relative drift over monitored integrals
    std::vector<double> drift_per_integral;
    Outcome outcome = Outcome::bounded_window;
};

/// Flow both time directions from t = 0 over [t_a, 0] and [0, t_b], recording
/// accepted steps and the drift of every monitored first integral.
template <class RHS>
Trajectory integrate_window(RHS&& rhs, const Vec3& y0, double t_a, double t_b,
                            const IntegratorOptions& opt,
                            const std::vector<TriPoly>& monitored = {}) {
    if (t_a > 0 || t_b < 0 || t_a >= t_b)
        throw validation_error("time window must satisfy t_a <= 0 <= t_b, t_a < t_b");
    Trajectory traj;
    std::vector<std::pair<double, Vec3>> backward;

    bool esc_b = false, esc_f = false;
    if (t_a < 0) {
        auto res = integrate_direction(rhs, y0, t_a, opt, [&](const StepRecord& s) {
            backward.emplace_back(s.t1, s.y1);
            return StepControl::proceed;
        });
        esc_b = res.escaped;
    }
    std::reverse(backward.begin(), backward.end());
    traj.samples = std::move(backward);
    traj.samples.emplace_back(0.0, y0);
    if (t_b > 0) {
        auto res = integrate_direction(rhs, y0, t_b, opt, [&](const StepRecord& s) {
            traj.samples.emplace_back(s.t1, s.y1);
            return StepControl::proceed;
        });
        esc_f = res.escaped;
    }

    traj.outcome = esc_b && esc_f  ? Outcome::escaped_both
                   : esc_f         ? Outcome::escaped_forward
                   : esc_b         ? Outcome::escaped_backward
                                   : Outcome::bounded_window;

    for (const auto& H : monitored) {
        const double h0 = H.eval(y0);
        const double denom = std::max(std::fabs(h0), 1.0);
        double drift = 0;
        for (const auto& [t, y] : traj.samples) drift = std::max(drift, std::fabs(H.eval(y) - h0));
        traj.drift_per_integral.push_back(drift / denom);
        traj.H_drift = std::max(traj.H_drift, drift / denom);
    }
    return traj;
}

} // namespace nildyn
