#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nildyn/unipoly.hpp"

namespace nildyn {

/// Open-closed enclosure (lo, hi] holding exactly one distinct real root of
/// the polynomial it was isolated from.
struct RootInterval {
    Rational lo;
    Rational hi;
    bool multiplicity_one = true;
};

/// Sturm chain p, p', -rem(...), ... ending at a constant.
inline std::vector<UniPoly> sturm_sequence(const UniPoly& p) {
    std::vector<UniPoly> seq;
    seq.push_back(p);
    UniPoly d = p.derivative();
    if (d.is_zero()) return seq;
    seq.push_back(d);
    while (true) {
        const UniPoly& a = seq[seq.size() - 2];
        const UniPoly& b = seq[seq.size() - 1];
        UniPoly r = divmod(a, b).second;
        if (r.is_zero()) break;
        seq.push_back(-r);
    }
    return seq;
}

inline int sign_variations_at(const std::vector<UniPoly>& seq, const Rational& x) {
    int variations = 0;
    int prev = 0;
    for (const auto& q : seq) {
        const int s = sign(q.eval(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++variations;
        prev = s;
    }
    return variations;
}

/// Number of distinct real roots in (a, b] (p need not be square-free; the
/// chain is built from its square-free part).
inline int count_roots_in(const UniPoly& p, const Rational& a, const Rational& b) {
    if (p.is_zero()) throw validation_error("indeterminate roots: zero polynomial");
    const UniPoly sf = squarefree_part(p);
    if (sf.degree() <= 0) return 0;
    const auto seq = sturm_sequence(sf);
    return sign_variations_at(seq, a) - sign_variations_at(seq, b);
}

/// Cauchy bound: all real roots lie in [-B, B].
inline Rational root_bound(const UniPoly& p) {
    Rational m(0);
    const Rational& lead = p.leading();
    for (int k = 0; k < p.degree(); ++k) {
        Rational r = abs(p.coeff(k) / lead);
        if (r > m) m = r;
    }
    return m + 1;
}

namespace detail {

inline void isolate_rec(const std::vector<UniPoly>& seq, const UniPoly& sf, Rational lo, Rational hi,
                        int nroots, std::vector<RootInterval>& out) {
    if (nroots == 0) return;
    if (nroots == 1) {
        out.push_back(RootInterval{std::move(lo), std::move(hi), true});
        return;
    }
    Rational mid = (lo + hi) / 2;
    // A root landing exactly on mid joins the left half: counts are over (a, b].
    const int left = sign_variations_at(seq, lo) - sign_variations_at(seq, mid);
    isolate_rec(seq, sf, lo, mid, left, out);
    isolate_rec(seq, sf, mid, hi, nroots - left, out);
}

} // namespace detail

/// Pairwise-disjoint isolating intervals, one per distinct real root.
/// Multiplicity flags refer to the original polynomial.
inline std::vector<RootInterval> isolate_real_roots(const UniPoly& p) {
    if (p.is_zero()) throw validation_error("indeterminate roots: zero polynomial");
    std::vector<RootInterval> out;
    if (p.degree() == 0) return out;
    const UniPoly sf = squarefree_part(p);
    const auto seq = sturm_sequence(sf);
    const Rational bound = root_bound(sf);
    const Rational lo = -bound, hi = bound;
    const int total = sign_variations_at(seq, lo) - sign_variations_at(seq, hi);
    detail::isolate_rec(seq, sf, lo, hi, total, out);

    // Mark roots that are multiple in the original p: they are exactly the
    // roots of gcd(p, p').
    const UniPoly g = poly_gcd(p, p.derivative());
    if (g.degree() >= 1) {
        for (auto& iv : out)
            if (count_roots_in(g, iv.lo, iv.hi) > 0) iv.multiplicity_one = false;
    }
    return out;
}

/// Shrink an isolating interval by Sturm-count bisection until
/// hi - lo <= tol; returns the midpoint (or the root itself when a bisection
/// point lands on it exactly). Count-based bisection keeps (lo, hi]
/// semantics even when a *different* root sits exactly on lo.
inline Rational refine_root(const RootInterval& interval, const UniPoly& p, const Rational& tol) {
    const UniPoly sf = squarefree_part(p);
    Rational lo = interval.lo, hi = interval.hi;
    if (sf.eval(hi) == 0) return hi;
    const auto seq = sturm_sequence(sf);
    int vhi = sign_variations_at(seq, hi);
    while (hi - lo > tol) {
        Rational mid = (lo + hi) / 2;
        if (sf.eval(mid) == 0) return mid;
        if (sign_variations_at(seq, mid) - vhi == 1) {
            lo = std::move(mid);
        } else {
            hi = std::move(mid);
            vhi = sign_variations_at(seq, hi);
        }
    }
    return (lo + hi) / 2;
}

namespace detail {

inline std::vector<Integer> small_divisors(Integer n) {
    std::vector<Integer> divs;
    if (n < 0) n = -n;
    if (n == 0 || n > 1000000) return divs; // exact detection only at desk scale
    for (Integer d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            divs.push_back(d);
            divs.push_back(n / d);
        }
    }
    return divs;
}

} // namespace detail

/// Rational-root-theorem check restricted to the given isolating interval.
/// Only attempted when the integer-cleared polynomial has a small leading and
/// trailing coefficient; returns nullopt otherwise (the root may still be
/// rational, just undetected).
inline std::optional<Rational> exact_rational_root(const UniPoly& p, const RootInterval& interval) {
    if (p.is_zero()) return std::nullopt;
    if (p.eval(interval.hi) == 0) return interval.hi;
    // Clear denominators.
    Integer common_den(1);
    for (const auto& c : p.coefficients()) {
        Integer den = denominator(c);
        common_den = boost::multiprecision::lcm(common_den, den);
    }
    std::vector<Integer> ic;
    ic.reserve(p.coefficients().size());
    for (const auto& c : p.coefficients()) ic.push_back(numerator(c * Rational(common_den)));
    // Strip the s^k factor (root 0 is caught as a candidate below).
    std::size_t low = 0;
    while (low < ic.size() && ic[low] == 0) ++low;
    if (low >= ic.size()) return std::nullopt;
    if (low > 0 && interval.lo < 0 && interval.hi >= 0) return Rational(0);
    const auto ps = detail::small_divisors(ic[low]);
    const auto qs = detail::small_divisors(ic.back());
    if (ps.empty() || qs.empty()) return std::nullopt;
    for (const auto& pn : ps) {
        for (const auto& qn : qs) {
            for (int s : {1, -1}) {
                Rational cand(pn * s, qn);
                if (cand > interval.lo && cand <= interval.hi && p.eval(cand) == 0) return cand;
            }
        }
    }
    return std::nullopt;
}

/// Exact sign of `classifier` at the root of `root_poly` isolated by
/// `interval`: refines until the classifier is root-free and sign-constant on
/// the enclosure. Returns 0 when the classifier vanishes at the root itself.
inline int sign_at_root(const UniPoly& classifier, const UniPoly& root_poly, RootInterval interval) {
    if (classifier.is_zero()) return 0;
    if (classifier.is_constant()) return sign(classifier.coeff(0));
    const UniPoly sf_root = squarefree_part(root_poly);
    const UniPoly shared = poly_gcd(sf_root, classifier);
    if (shared.degree() >= 1 && count_roots_in(shared, interval.lo, interval.hi) > 0) return 0;
    if (sf_root.eval(interval.hi) == 0) return sign(classifier.eval(interval.hi));
    const auto seq = sturm_sequence(sf_root);
    int vhi = sign_variations_at(seq, interval.hi);
    for (int iter = 0; iter < 4096; ++iter) {
        const int sa = sign(classifier.eval(interval.lo));
        const int sb = sign(classifier.eval(interval.hi));
        if (sa == sb && sa != 0 && count_roots_in(classifier, interval.lo, interval.hi) == 0) return sa;
        Rational mid = (interval.lo + interval.hi) / 2;
        if (sf_root.eval(mid) == 0) return sign(classifier.eval(mid));
        if (sign_variations_at(seq, mid) - vhi == 1) {
            interval.lo = std::move(mid);
        } else {
            interval.hi = std::move(mid);
            vhi = sign_variations_at(seq, interval.hi);
        }
    }
    throw consistency_error("sign_at_root failed to separate classifier from root");
}

} // namespace nildyn
