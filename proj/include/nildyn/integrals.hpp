#pragma once

#include <optional>

#include "nildyn/field.hpp"

namespace nildyn {

enum class Frame { original, psi_conjugated };

inline TriPoly lie_derivative(const std::array<TriPoly, 3>& field, const TriPoly& H) {
    return field[0] * H.partial(0) + field[1] * H.partial(1) + field[2] * H.partial(2);
}

/// True iff H is non-constant and its Lie derivative along the field is the
/// identically-zero polynomial. Constants are rejected by definition.
inline bool verify_first_integral(const std::array<TriPoly, 3>& field, const TriPoly& H) {
    if (H.is_constant()) return false;
    return lie_derivative(field, H).is_zero();
}

struct FirstIntegralSet {
    Frame frame = Frame::psi_conjugated;
    TriPoly H; // always present
    std::optional<TriPoly> H1, H2;
    std::optional<std::array<TriPoly, 3>> independence_witness; // grad H1 x grad H2

    // The same integrals transported to the original frame (H o Psi^{-1}).
    TriPoly H_original;
    std::optional<TriPoly> H1_original, H2_original;

    std::vector<TriPoly> all(Frame f) const {
        std::vector<TriPoly> v;
        if (f == Frame::psi_conjugated) {
            v.push_back(H);
            if (H1) v.push_back(*H1);
            if (H2) v.push_back(*H2);
        } else {
            v.push_back(H_original);
            if (H1_original) v.push_back(*H1_original);
            if (H2_original) v.push_back(*H2_original);
        }
        return v;
    }
};

namespace detail {

inline std::array<TriPoly, 3> grad(const TriPoly& H) {
    return {H.partial(0), H.partial(1), H.partial(2)};
}

inline std::array<TriPoly, 3> cross(const std::array<TriPoly, 3>& a, const std::array<TriPoly, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline bool is_zero_vec(const std::array<TriPoly, 3>& v) {
    return v[0].is_zero() && v[1].is_zero() && v[2].is_zero();
}

} // namespace detail

/// The always-present polynomial first integral, built in the conjugated
/// frame:
///   H(u,v,w) = int P2(w) dw - (a12/(d2 p_{d2})) int P1(v)^2 dv - A3 v.
/// Both the conjugated-frame and the transported original-frame identities
/// are verified symbolically before returning.
inline FirstIntegralSet derive_H(const FieldParams& params) {
    params.validate();
    FirstIntegralSet set;
    set.frame = Frame::psi_conjugated;

    const UniPoly int_p2 = params.P2.antiderivative();
    const UniPoly int_p1sq = (params.P1 * params.P1).antiderivative();
    const Rational coef = params.a12 / params.d2p2();
    set.H = TriPoly::lift(int_p2, 2) - coef * TriPoly::lift(int_p1sq, 1) -
            params.A3 * TriPoly::variable(1);

    if (!verify_first_integral(conjugated_field_closed_form(params), set.H))
        throw consistency_error("H is not a first integral of the conjugated system");

    const PolyMap3 psi = psi_automorphism(params);
    set.H_original = set.H.substitute(psi.inverse().comp);
    if (!verify_first_integral(build_field(params).comp, set.H_original))
        throw consistency_error("transported H is not a first integral of the original system");
    return set;
}

/// The two functionally independent integrals of the a12 = 0 branch:
///   A3 = 0:  H1 = w,                         H2 = int P1 dv - u P2(w)
///   A3 != 0: H1 = int P2 dw - A3 v,
///            H2 = A3^{d1+1} u - sum_j (-1)^j A3^{d1-j} P1^{(j)}(v) xi_j(w),
///            xi_0 = w, xi_j = int P2 xi_{j-1} dw.
/// Lie derivatives and the independence witness are verified symbolically.
inline FirstIntegralSet derive_complete(const FieldParams& params) {
    params.validate();
    if (params.a12 != 0)
        throw validation_error(
            "complete integrability is established only for deg A1 <= 1 (a12 = 0)");

    FirstIntegralSet set = derive_H(params);
    const int d1 = params.d1();

    if (params.A3 == 0) {
        set.H1 = TriPoly::variable(2);
        set.H2 = TriPoly::lift(params.P1.antiderivative(), 1) -
                 TriPoly::variable(0) * TriPoly::lift(params.P2, 2);
    } else {
        set.H1 = set.H; // the general H reduces to this one when a12 = 0
        std::vector<UniPoly> xi;
        xi.push_back(UniPoly::variable()); // xi_0(w) = w
        for (int j = 1; j <= d1; ++j) xi.push_back((params.P2 * xi.back()).antiderivative());

        TriPoly h2 = rational_pow(params.A3, static_cast<unsigned>(d1) + 1) * TriPoly::variable(0);
        UniPoly djP1 = params.P1;
        for (int j = 0; j <= d1; ++j) {
            const Rational sgn = (j % 2 == 0) ? Rational(1) : Rational(-1);
            const Rational a3pow = rational_pow(params.A3, static_cast<unsigned>(d1 - j));
            h2 = h2 - (sgn * a3pow) * (TriPoly::lift(djP1, 1) * TriPoly::lift(xi[static_cast<std::size_t>(j)], 2));
            djP1 = djP1.derivative();
        }
        set.H2 = std::move(h2);
    }

    const auto field = conjugated_field_closed_form(params);
    if (!verify_first_integral(field, *set.H1) || !verify_first_integral(field, *set.H2))
        throw consistency_error("complete-integrability pair failed the Lie-derivative identity");

    set.independence_witness = detail::cross(detail::grad(*set.H1), detail::grad(*set.H2));
    if (detail::is_zero_vec(*set.independence_witness))
        throw consistency_error("independence witness vanished identically");

    const PolyMap3 psi = psi_automorphism(params);
    set.H1_original = set.H1->substitute(psi.inverse().comp);
    set.H2_original = set.H2->substitute(psi.inverse().comp);
    const auto orig = build_field(params).comp;
    if (!verify_first_integral(orig, *set.H1_original) ||
        !verify_first_integral(orig, *set.H2_original))
        throw consistency_error("transported pair failed the Lie-derivative identity");
    return set;
}

} // namespace nildyn
