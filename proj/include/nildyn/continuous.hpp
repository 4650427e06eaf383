#pragma once

#include "nildyn/integrals.hpp"
#include "nildyn/ode.hpp"

namespace nildyn {

/// Flattened double-precision evaluator for a polynomial right-hand side;
/// avoids the exact layer inside integrator hot loops.
class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(const TriPoly& p) {
        for (const auto& [m, c] : p.terms()) {
            terms_.push_back(Term{to_double(c), m.i, m.j, m.k});
            dx_ = std::max(dx_, m.i);
            dy_ = std::max(dy_, m.j);
            dz_ = std::max(dz_, m.k);
        }
    }

    double eval(const Vec3& p) const {
        double px[kMaxDeg + 1], py[kMaxDeg + 1], pz[kMaxDeg + 1];
        fill_powers(px, p[0], dx_);
        fill_powers(py, p[1], dy_);
        fill_powers(pz, p[2], dz_);
        double r = 0;
        for (const auto& t : terms_) r += t.c * px[t.i] * py[t.j] * pz[t.k];
        return r;
    }

private:
    static constexpr unsigned kMaxDeg = 96;
    struct Term {
        double c;
        unsigned i, j, k;
    };
    static void fill_powers(double* buf, double x, unsigned d) {
        buf[0] = 1.0;
        for (unsigned e = 1; e <= std::min(d, kMaxDeg); ++e) buf[e] = buf[e - 1] * x;
    }
    std::vector<Term> terms_;
    unsigned dx_ = 0, dy_ = 0, dz_ = 0;
};

/// Vector field as an integrator-ready callable.
class CompiledField {
public:
    explicit CompiledField(const std::array<TriPoly, 3>& f)
        : c_{CompiledPoly(f[0]), CompiledPoly(f[1]), CompiledPoly(f[2])} {}
    Vec3 operator()(const Vec3& p) const { return {c_[0].eval(p), c_[1].eval(p), c_[2].eval(p)}; }

private:
    std::array<CompiledPoly, 3> c_;
};

/// Closed-form flow of the deg P1 = deg P2 = 1, a12 = 0 family. The linear
/// normalization X = u/(p1 p2), Y = P1(v)/(p1 p2), Z = P2(w)/p2 turns the
/// conjugated system into X' = Y, Y' = Z, Z' = A3, solved by a cubic in t.
/// Input and output are in original coordinates.
inline Vec3 explicit_flow_linear_case(const FieldParams& params, const Vec3& start, double t) {
    params.validate();
    if (params.d1() != 1 || params.d2() != 1 || params.a12 != 0)
        throw validation_error("explicit flow requires deg P1 = deg P2 = 1 and a12 = 0");
    const double p1 = to_double(params.p_lead1());
    const double p10 = to_double(params.P1.coeff(0));
    const double p2 = to_double(params.p_lead2());
    const double p20 = to_double(params.P2.coeff(0));
    const double a3 = to_double(params.A3);
    const double a10 = to_double(params.a10), a11 = to_double(params.a11);
    const double a20 = to_double(params.a20), a21 = to_double(params.a21);

    const double x = start[0], y = start[1], z = start[2];
    // Psi^{-1}: original -> conjugated.
    const double u0 = x;
    const double v0 = y + (a10 + a11 * x);
    const double w0 = z + (a20 + a21 * x) / p2;
    // Linear normalization.
    const double X0 = u0 / (p1 * p2);
    const double Y0 = (p1 * v0 + p10) / (p1 * p2);
    const double Z0 = (p2 * w0 + p20) / p2;

    const double X = a3 * t * t * t / 6 + Z0 * t * t / 2 + Y0 * t + X0;
    const double Y = a3 * t * t / 2 + Z0 * t + Y0;
    const double Z = a3 * t + Z0;

    const double u = p1 * p2 * X;
    const double v = (p1 * p2 * Y - p10) / p1;
    const double w = (p2 * Z - p20) / p2;
    // Psi: conjugated -> original.
    return {u, v - (a10 + a11 * u), w - (a20 + a21 * u) / p2};
}

struct SimulationResult {
    Trajectory trajectory;
    FirstIntegralSet integrals;
    std::vector<std::string> integral_names;
};

/// Integrate the original-frame flow over [t_a, t_b] (window must contain 0)
/// while monitoring every known polynomial first integral.
inline SimulationResult simulate(const FieldParams& params, const Vec3& x0, double t_a, double t_b,
                                 double tol, double escape_radius = 1e6) {
    SimulationResult out;
    out.integrals = (params.a12 == 0) ? derive_complete(params) : derive_H(params);
    out.integral_names.push_back("H");
    if (out.integrals.H1_original) out.integral_names.push_back("H1");
    if (out.integrals.H2_original) out.integral_names.push_back("H2");

    const CompiledField rhs(build_field(params).comp);
    IntegratorOptions opt;
    opt.tol = tol;
    opt.escape_radius = escape_radius;
    out.trajectory = integrate_window(rhs, x0, t_a, t_b, opt, out.integrals.all(Frame::original));
    return out;
}

} // namespace nildyn
