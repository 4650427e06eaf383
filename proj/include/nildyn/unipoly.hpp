#pragma once

#include <algorithm>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nildyn/rational.hpp"

namespace nildyn {

/// Dense univariate polynomial with exact rational coefficients, ascending
/// degree order. The zero polynomial stores no coefficients.
class UniPoly {
public:
    UniPoly() = default;

    explicit UniPoly(Rational constant) {
        if (constant != 0) coeffs_.push_back(std::move(constant));
    }

    explicit UniPoly(std::vector<Rational> ascending) : coeffs_(std::move(ascending)) { trim(); }

    static UniPoly zero() { return UniPoly(); }

    /// The monomial s.
    static UniPoly variable() { return UniPoly(std::vector<Rational>{Rational(0), Rational(1)}); }

    static UniPoly from_ints(std::initializer_list<long long> ascending) {
        std::vector<Rational> c;
        c.reserve(ascending.size());
        for (long long v : ascending) c.emplace_back(v);
        return UniPoly(std::move(c));
    }

    bool is_zero() const { return coeffs_.empty(); }
    bool is_constant() const { return coeffs_.size() <= 1; }

    /// Degree; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    const Rational& coeff(int k) const {
        static const Rational kZero(0);
        if (k < 0 || k >= static_cast<int>(coeffs_.size())) return kZero;
        return coeffs_[static_cast<std::size_t>(k)];
    }

    const Rational& leading() const {
        static const Rational kZero(0);
        return coeffs_.empty() ? kZero : coeffs_.back();
    }

    const std::vector<Rational>& coefficients() const { return coeffs_; }

    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
        return UniPoly(std::move(c));
    }

    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
        std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
        return UniPoly(std::move(c));
    }

    friend UniPoly operator-(const UniPoly& a) {
        std::vector<Rational> c = a.coeffs_;
        for (auto& q : c) q = -q;
        return UniPoly(std::move(c));
    }

    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return UniPoly();
        std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return UniPoly(std::move(c));
    }

    friend UniPoly operator*(const UniPoly& a, const Rational& s) {
        if (s == 0) return UniPoly();
        std::vector<Rational> c = a.coeffs_;
        for (auto& q : c) q *= s;
        return UniPoly(std::move(c));
    }
    friend UniPoly operator*(const Rational& s, const UniPoly& a) { return a * s; }

    friend UniPoly operator+(const UniPoly& a, const Rational& s) { return a + UniPoly(s); }
    friend UniPoly operator-(const UniPoly& a, const Rational& s) { return a - UniPoly(s); }

    UniPoly pow(unsigned e) const {
        UniPoly r(Rational(1));
        UniPoly b = *this;
        while (e) {
            if (e & 1u) r = r * b;
            b = b * b;
            e >>= 1u;
        }
        return r;
    }

    UniPoly derivative() const {
        if (coeffs_.size() <= 1) return UniPoly();
        std::vector<Rational> c(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) c[i - 1] = coeffs_[i] * Rational(static_cast<long>(i));
        return UniPoly(std::move(c));
    }

    /// Antiderivative with integration constant 0.
    UniPoly antiderivative() const {
        if (is_zero()) return UniPoly();
        std::vector<Rational> c(coeffs_.size() + 1, Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            c[i + 1] = coeffs_[i] / Rational(static_cast<long>(i + 1));
        return UniPoly(std::move(c));
    }

    Rational eval(const Rational& s) const {
        Rational r(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * s + *it;
        return r;
    }

    double eval_double(double s) const {
        double r = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * s + to_double(*it);
        return r;
    }

    std::vector<double> coeffs_double() const {
        std::vector<double> c;
        c.reserve(coeffs_.size());
        for (const auto& q : coeffs_) c.push_back(to_double(q));
        return c;
    }

    /// this(inner(s)).
    UniPoly compose(const UniPoly& inner) const {
        UniPoly r;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * inner + UniPoly(*it);
        return r;
    }

    /// Quotient and remainder with deg(rem) < deg(divisor).
    friend std::pair<UniPoly, UniPoly> divmod(const UniPoly& num, const UniPoly& den) {
        if (den.is_zero()) throw validation_error("polynomial division by zero");
        UniPoly q, r = num;
        const int dd = den.degree();
        const Rational& lead = den.leading();
        while (!r.is_zero() && r.degree() >= dd) {
            const int k = r.degree() - dd;
            const Rational f = r.leading() / lead;
            std::vector<Rational> mono(static_cast<std::size_t>(k) + 1, Rational(0));
            mono.back() = f;
            UniPoly m(std::move(mono));
            q = q + m;
            r = r - m * den;
        }
        return {q, r};
    }

    std::string to_string(const std::string& var = "s") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int k = degree(); k >= 0; --k) {
            const Rational& c = coeff(k);
            if (c == 0) continue;
            if (!first) os << (c > 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            first = false;
            const Rational a = nildyn::abs(c);
            if (k == 0 || a != 1) os << nildyn::to_string(a);
            if (k > 0) {
                if (a != 1) os << "*";
                os << var;
                if (k > 1) os << "^" << k;
            }
        }
        return os.str();
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

/// Monic gcd via the Euclidean algorithm (exact; fine at the degrees used here).
inline UniPoly poly_gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero() && a.leading() != 1) a = a * (Rational(1) / a.leading());
    return a;
}

/// p with repeated roots stripped: p / gcd(p, p').
inline UniPoly squarefree_part(const UniPoly& p) {
    if (p.is_zero() || p.degree() == 0) return p;
    const UniPoly g = poly_gcd(p, p.derivative());
    if (g.degree() <= 0) return p;
    return divmod(p, g).first;
}

} // namespace nildyn
