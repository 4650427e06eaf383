#pragma once

#include <utility>
#include <vector>

#include "nildyn/params_io.hpp"

namespace nildyn {

/// The parameter files shipped under params/: one per regime of interest.
inline std::vector<std::pair<std::string, ParamsDocument>> bundled_examples() {
    std::vector<std::pair<std::string, ParamsDocument>> out;
    auto add = [&out](const char* name, FieldParams p, const char* label) {
        out.emplace_back(name, from_field_params(p, label));
    };

    FieldParams trivial;
    trivial.P1 = UniPoly::variable();
    trivial.P2 = UniPoly::variable();
    add("trivial_shift", trivial, "identity-like field: all shifts vanish");

    FieldParams linear;
    linear.P1 = UniPoly::variable();
    linear.P2 = UniPoly::variable();
    linear.a12 = Rational(1);
    add("linear_p1", linear, "linear P1 with quadratic A1: the canonical 3-cycle family (nu = 0)");

    FieldParams two_annuli;
    two_annuli.P1 = UniPoly(std::vector<Rational>{Rational(-3), Rational(-1), Rational(1)});
    two_annuli.P2 = UniPoly::variable();
    two_annuli.a12 = Rational(1);
    two_annuli.A3 = Rational(-6);
    add("two_annuli", two_annuli, "quadratic P1 whose planar Hamiltonian has two period annuli");

    FieldParams mu_neg = linear;
    mu_neg.A3 = Rational(-6);
    add("mu_negative", mu_neg, "mu = -6: unique isochronous periodic surface");

    FieldParams mu_zero = linear;
    add("mu_zero", mu_zero, "mu = 0: unique cuspidal invariant surface");

    FieldParams mu_pos = linear;
    mu_pos.A3 = Rational(1);
    add("mu_positive", mu_pos, "mu = 1: every trajectory escapes both ways");

    FieldParams big;
    big.P1 = UniPoly(std::vector<Rational>{Rational(-2), Rational(0), Rational(1)}); // s^2 - 2
    big.P2 = UniPoly(std::vector<Rational>{Rational(0), Rational(1), Rational(0), Rational(1)}); // s^3 + s
    big.a10 = Rational(1, 2);
    big.a11 = Rational(-3);
    big.a20 = Rational(2);
    big.a21 = Rational(1, 3);
    big.A3 = Rational(-1);
    add("big_degree", big, "deg P2 = 3 branch (forces a12 = 0)");

    return out;
}

} // namespace nildyn
