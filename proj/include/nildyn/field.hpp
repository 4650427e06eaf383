#pragma once

#include "nildyn/field_params.hpp"
#include "nildyn/polymap.hpp"

namespace nildyn {

/// F = (F1, F2, F3):
///   F1(x,y)   = P1(y + A1(x))
///   F2(x,y,z) = P2(z + A2(x)/(d2 p_{d2})) - A1'(x) F1(x,y)
///   F3(x,y)   = -[-(1/2) A1''(x) F1^2 + A2'(x) F1] / (d2 p_{d2}) + A3
/// Same components serve as the discrete map and as the vector field.
inline PolyMap3 build_field(const FieldParams& params) {
    params.validate();
    const TriPoly x = TriPoly::variable(0);
    const TriPoly y = TriPoly::variable(1);
    const TriPoly z = TriPoly::variable(2);

    const TriPoly a1x = TriPoly::lift(params.A1(), 0);
    const TriPoly a1dx = TriPoly::lift(params.A1().derivative(), 0);
    const TriPoly a2x = TriPoly::lift(params.A2(), 0);
    const Rational inv_d2p2 = Rational(1) / params.d2p2();

    const TriPoly f1 = TriPoly::lift(params.P1, 1).substitute({x, y + a1x, z});
    const TriPoly f2 =
        TriPoly::lift(params.P2, 2).substitute({x, y, z + inv_d2p2 * a2x}) - a1dx * f1;
    // A1'' = 2 a12, A2' = a21.
    const TriPoly bracket = Rational(-1) * params.a12 * (f1 * f1) + params.a21 * f1;
    const TriPoly f3 = (-inv_d2p2) * bracket + TriPoly::constant(params.A3);

    return PolyMap3({f1, f2, f3});
}

/// Both nilpotency tests on JF: vanishing of the characteristic coefficients
/// and vanishing of (JF)^3. The two must agree; disagreement is an internal
/// error, not a verdict.
struct NilpotencyReport {
    TriPoly trace;
    TriPoly minor2_sum;
    TriPoly det;
    Mat3Poly jac_cubed;
    bool char_coeffs_vanish = false;
    bool cube_vanishes = false;
    bool verdict = false;
};

inline NilpotencyReport check_nilpotent(const PolyMap3& F) {
    NilpotencyReport r;
    const Mat3Poly j = F.jacobian();
    r.trace = mat3_trace(j);
    r.minor2_sum = mat3_minor2_sum(j);
    r.det = mat3_det(j);
    r.jac_cubed = mat3_mul(mat3_mul(j, j), j);
    r.char_coeffs_vanish = r.trace.is_zero() && r.minor2_sum.is_zero() && r.det.is_zero();
    r.cube_vanishes = mat3_is_zero(r.jac_cubed);
    if (r.char_coeffs_vanish != r.cube_vanishes)
        throw consistency_error("nilpotency cross-check mismatch: characteristic coefficients vs (JF)^3");
    r.verdict = r.char_coeffs_vanish;
    return r;
}

/// Psi(u,v,w) = (u, v - A1(u), w - A2(u)/(d2 p_{d2})), with exact inverse
/// (x, y + A1(x), z + A2(x)/(d2 p_{d2})).
inline PolyMap3 psi_automorphism(const FieldParams& params) {
    params.validate();
    const TriPoly u = TriPoly::variable(0);
    const TriPoly v = TriPoly::variable(1);
    const TriPoly w = TriPoly::variable(2);
    const TriPoly a1u = TriPoly::lift(params.A1(), 0);
    const TriPoly a2u = TriPoly::lift(params.A2(), 0);
    const Rational inv_d2p2 = Rational(1) / params.d2p2();

    PolyMap3 psi({u, v - a1u, w - inv_d2p2 * a2u});
    PolyMap3 inv({u, v + a1u, w + inv_d2p2 * a2u});
    psi.set_inverse(std::move(inv));
    return psi;
}

/// The Psi-conjugated discrete map, closed form:
///   (u,v,w) -> (P1(v), P2(w) + a12 P1(v)(P1(v) - 2u) + a10,
///               (a12/(d2 p_{d2})) P1(v)^2 + A3 + a20/(d2 p_{d2})).
inline PolyMap3 conjugated_map_closed_form(const FieldParams& params) {
    params.validate();
    const TriPoly u = TriPoly::variable(0);
    const TriPoly p1v = TriPoly::lift(params.P1, 1);
    const TriPoly p2w = TriPoly::lift(params.P2, 2);
    const Rational inv_d2p2 = Rational(1) / params.d2p2();

    const TriPoly g1 = p1v;
    const TriPoly g2 = p2w + params.a12 * (p1v * (p1v - Rational(2) * u)) + TriPoly::constant(params.a10);
    const TriPoly g3 = (params.a12 * inv_d2p2) * (p1v * p1v) +
                       TriPoly::constant(params.A3 + params.a20 * inv_d2p2);
    return PolyMap3({g1, g2, g3});
}

/// The Psi-conjugated vector field, closed form:
///   u' = P1(v), v' = P2(w), w' = (a12/(d2 p_{d2})) P1(v)^2 + A3.
inline std::array<TriPoly, 3> conjugated_field_closed_form(const FieldParams& params) {
    params.validate();
    const TriPoly p1v = TriPoly::lift(params.P1, 1);
    const TriPoly p2w = TriPoly::lift(params.P2, 2);
    const Rational inv_d2p2 = Rational(1) / params.d2p2();
    return {p1v, p2w, (params.a12 * inv_d2p2) * (p1v * p1v) + TriPoly::constant(params.A3)};
}

/// Second-stage automorphism of the d2 = 1 branch, with its derived constants.
struct Psi2Record {
    PolyMap3 map; // carries exact inverse
    Rational alpha;
    Rational nu;
};

/// Psi2(X,Y,Z) = (X + P1(Y), Y, (Z + a12 P1(Y)(P1(Y) + 2X) - alpha)/p21),
/// defined for deg P2 = 1 with P2(s) = p21 s + p20 and alpha = p20 + a10.
inline Psi2Record psi2_automorphism(const FieldParams& params) {
    params.validate();
    if (params.d2() != 1)
        throw validation_error("Psi2 requires deg P2 = 1");
    const Rational p21 = params.P2.coeff(1);
    const Rational alpha = params.alpha();
    const Rational nu = params.nu();

    const TriPoly X = TriPoly::variable(0);
    const TriPoly Y = TriPoly::variable(1);
    const TriPoly Z = TriPoly::variable(2);
    const TriPoly p1Y = TriPoly::lift(params.P1, 1);

    PolyMap3 psi2({X + p1Y, Y,
                   (Rational(1) / p21) *
                       (Z + params.a12 * (p1Y * (p1Y + Rational(2) * X)) - TriPoly::constant(alpha))});

    // Inverse: (u,v,w) -> (u - P1(v), v, p21 w - a12 P1(v)(2u - P1(v)) + alpha).
    const TriPoly u = TriPoly::variable(0);
    const TriPoly v = TriPoly::variable(1);
    const TriPoly w = TriPoly::variable(2);
    const TriPoly p1v = TriPoly::lift(params.P1, 1);
    PolyMap3 inv({u - p1v, v,
                  p21 * w - params.a12 * (p1v * (Rational(2) * u - p1v)) + TriPoly::constant(alpha)});
    psi2.set_inverse(std::move(inv));
    return Psi2Record{std::move(psi2), alpha, nu};
}

/// The fully simplified d2 = 1 discrete map, closed form:
///   (X,Y,Z) -> (P1(Y) - P1(Z), Z, a12 (P1(Y) - P1(Z))^2 + nu).
inline PolyMap3 simplified_map_closed_form(const FieldParams& params) {
    params.validate();
    if (params.d2() != 1)
        throw validation_error("simplified map requires deg P2 = 1");
    const Rational nu = params.nu();
    const TriPoly Z = TriPoly::variable(2);
    const TriPoly diff = TriPoly::lift(params.P1, 1) - TriPoly::lift(params.P1, 2);
    return PolyMap3({diff, Z, params.a12 * (diff * diff) + TriPoly::constant(nu)});
}

} // namespace nildyn
