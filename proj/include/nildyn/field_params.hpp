#pragma once

#include "nildyn/unipoly.hpp"

namespace nildyn {

/// Parameter record defining one field of the family:
///   P1, P2 of degree >= 1, A1(x) = a10 + a11 x + a12 x^2,
///   A2(x) = a20 + a21 x, constant A3; when deg P2 > 1 the quadratic part of
///   A1 must vanish.
struct FieldParams {
    UniPoly P1;
    UniPoly P2;
    Rational a10{0}, a11{0}, a12{0};
    Rational a20{0}, a21{0};
    Rational A3{0};

    int d1() const { return P1.degree(); }
    int d2() const { return P2.degree(); }
    const Rational& p_lead1() const { return P1.leading(); }
    const Rational& p_lead2() const { return P2.leading(); }

    UniPoly A1() const { return UniPoly(std::vector<Rational>{a10, a11, a12}); }
    UniPoly A2() const { return UniPoly(std::vector<Rational>{a20, a21}); }

    /// d2 * p_{d2}: the denominator that recurs through all the formulas.
    Rational d2p2() const { return Rational(d2()) * p_lead2(); }

    void validate() const {
        if (d1() < 1) throw validation_error("P1: degree must be at least 1");
        if (d2() < 1) throw validation_error("P2: degree must be at least 1");
        if (d2() > 1 && a12 != 0)
            throw validation_error("A1.a12: deg P2 > 1 requires deg A1 <= 1 (a12 = 0)");
    }

    bool valid() const {
        try {
            validate();
            return true;
        } catch (const validation_error&) {
            return false;
        }
    }

    // Derived constants of the d2 = 1 branch (P2(s) = p21 s + p20).
    Rational alpha() const {
        if (d2() != 1) throw validation_error("alpha is defined only for deg P2 = 1");
        return P2.coeff(0) + a10;
    }

    Rational nu() const {
        if (d2() != 1) throw validation_error("nu is defined only for deg P2 = 1");
        return P2.coeff(1) * A3 + a20 + alpha();
    }

    /// mu = A3 * a12 * p_{d2} * p_{d1}^2 (the d1 = d2 = 1 classifier).
    Rational mu() const { return A3 * a12 * p_lead2() * p_lead1() * p_lead1(); }
};

} // namespace nildyn
