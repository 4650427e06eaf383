#pragma once

#include <array>
#include <compare>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nildyn/unipoly.hpp"

namespace nildyn {

struct Monom {
    unsigned i = 0, j = 0, k = 0;
    auto operator<=>(const Monom&) const = default;
    unsigned total() const { return i + j + k; }
    unsigned operator[](int axis) const { return axis == 0 ? i : axis == 1 ? j : k; }
};

/// Sparse polynomial in three variables with exact rational coefficients.
/// No zero coefficients are stored.
class TriPoly {
public:
    TriPoly() = default;

    static TriPoly constant(Rational c) {
        TriPoly p;
        if (c != 0) p.terms_[Monom{}] = std::move(c);
        return p;
    }

    /// axis 0, 1, 2 -> x, y, z.
    static TriPoly variable(int axis) {
        TriPoly p;
        Monom m;
        (axis == 0 ? m.i : axis == 1 ? m.j : m.k) = 1;
        p.terms_[m] = Rational(1);
        return p;
    }

    static TriPoly monomial(Rational c, unsigned i, unsigned j, unsigned k) {
        TriPoly p;
        if (c != 0) p.terms_[Monom{i, j, k}] = std::move(c);
        return p;
    }

    /// Inject a univariate polynomial along one axis.
    static TriPoly lift(const UniPoly& p, int axis) {
        TriPoly r;
        for (int d = 0; d <= p.degree(); ++d) {
            if (p.coeff(d) == 0) continue;
            Monom m;
            (axis == 0 ? m.i : axis == 1 ? m.j : m.k) = static_cast<unsigned>(d);
            r.terms_[m] = p.coeff(d);
        }
        return r;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monom{});
    }
    std::size_t term_count() const { return terms_.size(); }

    int total_degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.total()));
        return d;
    }

    int degree_in(int axis) const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m[axis]));
        return d;
    }

    Rational coeff(const Monom& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    const std::map<Monom, Rational>& terms() const { return terms_; }

    friend bool operator==(const TriPoly& a, const TriPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const TriPoly& a, const TriPoly& b) { return !(a == b); }

    friend TriPoly operator+(const TriPoly& a, const TriPoly& b) {
        TriPoly r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }

    friend TriPoly operator-(const TriPoly& a, const TriPoly& b) {
        TriPoly r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }

    friend TriPoly operator-(const TriPoly& a) {
        TriPoly r = a;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    friend TriPoly operator*(const TriPoly& a, const TriPoly& b) {
        TriPoly r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                r.add_term(Monom{ma.i + mb.i, ma.j + mb.j, ma.k + mb.k}, ca * cb);
        return r;
    }

    friend TriPoly operator*(const TriPoly& a, const Rational& s) {
        if (s == 0) return TriPoly();
        TriPoly r = a;
        for (auto& [m, c] : r.terms_) c *= s;
        return r;
    }
    friend TriPoly operator*(const Rational& s, const TriPoly& a) { return a * s; }

    TriPoly pow(unsigned e) const {
        TriPoly r = constant(Rational(1));
        TriPoly b = *this;
        while (e) {
            if (e & 1u) r = r * b;
            b = b * b;
            e >>= 1u;
        }
        return r;
    }

    TriPoly partial(int axis) const {
        TriPoly r;
        for (const auto& [m, c] : terms_) {
            const unsigned e = m[axis];
            if (e == 0) continue;
            Monom n = m;
            (axis == 0 ? n.i : axis == 1 ? n.j : n.k) = e - 1;
            r.add_term(n, c * Rational(static_cast<long>(e)));
        }
        return r;
    }

    Rational eval(const std::array<Rational, 3>& p) const {
        // Power tables keep repeated exponents cheap.
        std::array<std::vector<Rational>, 3> pows;
        for (int a = 0; a < 3; ++a) {
            pows[a].push_back(Rational(1));
            const int d = degree_in(a);
            for (int e = 1; e <= d; ++e) pows[a].push_back(pows[a].back() * p[static_cast<std::size_t>(a)]);
        }
        Rational r(0);
        for (const auto& [m, c] : terms_) r += c * pows[0][m.i] * pows[1][m.j] * pows[2][m.k];
        return r;
    }

    double eval(const std::array<double, 3>& p) const {
        std::array<std::vector<double>, 3> pows;
        for (int a = 0; a < 3; ++a) {
            pows[a].push_back(1.0);
            const int d = degree_in(a);
            for (int e = 1; e <= d; ++e) pows[a].push_back(pows[a].back() * p[static_cast<std::size_t>(a)]);
        }
        double r = 0.0;
        for (const auto& [m, c] : terms_) r += to_double(c) * pows[0][m.i] * pows[1][m.j] * pows[2][m.k];
        return r;
    }

    /// Substitute polynomials for the three variables.
    TriPoly substitute(const std::array<TriPoly, 3>& sub) const {
        std::array<std::vector<TriPoly>, 3> pows;
        for (int a = 0; a < 3; ++a) {
            pows[a].push_back(constant(Rational(1)));
            const int d = degree_in(a);
            for (int e = 1; e <= d; ++e) pows[a].push_back(pows[a].back() * sub[static_cast<std::size_t>(a)]);
        }
        TriPoly r;
        for (const auto& [m, c] : terms_) r = r + constant(c) * pows[0][m.i] * pows[1][m.j] * pows[2][m.k];
        return r;
    }

    std::string to_string(const std::array<std::string, 3>& vars = {"x", "y", "z"}) const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        // Highest total degree first, then map order.
        std::vector<std::pair<Monom, Rational>> sorted(terms_.begin(), terms_.end());
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
            if (a.first.total() != b.first.total()) return a.first.total() > b.first.total();
            return b.first < a.first;
        });
        for (const auto& [m, c] : sorted) {
            if (!first) os << (c > 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            first = false;
            const Rational a = nildyn::abs(c);
            const bool unit = (a == 1) && m.total() > 0;
            if (!unit) os << nildyn::to_string(a);
            bool star = !unit;
            const unsigned es[3] = {m.i, m.j, m.k};
            for (int v = 0; v < 3; ++v) {
                if (es[v] == 0) continue;
                if (star) os << "*";
                star = true;
                os << vars[static_cast<std::size_t>(v)];
                if (es[v] > 1) os << "^" << es[v];
            }
        }
        return os.str();
    }

private:
    void add_term(const Monom& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    std::map<Monom, Rational> terms_;
};

} // namespace nildyn
