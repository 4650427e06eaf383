#pragma once

#include <random>

#include "nildyn/field_params.hpp"

namespace nd_test {

using nildyn::FieldParams;
using nildyn::Rational;
using nildyn::UniPoly;

/// Rational with numerator in [-5, 5] and denominator in {1, 2, 3}.
inline Rational random_rational(std::mt19937_64& rng, bool nonzero = false) {
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 3);
    for (;;) {
        Rational q(num(rng), den(rng));
        if (!nonzero || q != 0) return q;
    }
}

inline UniPoly random_unipoly(std::mt19937_64& rng, int degree) {
    std::vector<Rational> c;
    for (int i = 0; i < degree; ++i) c.push_back(random_rational(rng));
    c.push_back(random_rational(rng, true)); // nonzero leading coefficient
    return UniPoly(std::move(c));
}

enum class Branch { deg_p2_one, deg_p2_big, either };

/// Random valid parameter record: degrees in [1, max_deg], coefficients in
/// [-5, 5], the deg P2 > 1 branch forcing a12 = 0.
inline FieldParams random_params(std::mt19937_64& rng, Branch branch = Branch::either,
                                 int max_deg = 4) {
    std::uniform_int_distribution<int> deg(1, max_deg);
    std::uniform_int_distribution<int> deg2(2, std::max(2, max_deg));
    std::uniform_int_distribution<int> coin(0, 1);

    const bool big = branch == Branch::deg_p2_big || (branch == Branch::either && coin(rng));
    FieldParams p;
    p.P1 = random_unipoly(rng, deg(rng));
    p.P2 = random_unipoly(rng, big ? deg2(rng) : 1);
    p.a10 = random_rational(rng);
    p.a11 = random_rational(rng);
    p.a12 = big ? Rational(0) : random_rational(rng);
    p.a20 = random_rational(rng);
    p.a21 = random_rational(rng);
    p.A3 = random_rational(rng);
    p.validate();
    return p;
}

inline std::array<Rational, 3> random_point(std::mt19937_64& rng) {
    return {random_rational(rng), random_rational(rng), random_rational(rng)};
}

} // namespace nd_test
