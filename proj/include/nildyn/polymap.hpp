#pragma once

#include <memory>
#include <utility>

#include "nildyn/tripoly.hpp"

namespace nildyn {

using Mat3Poly = std::array<std::array<TriPoly, 3>, 3>;

/// Polynomial self-map of 3-space. Serves as discrete map, vector field and
/// coordinate change alike; automorphisms carry their exact inverse.
class PolyMap3 {
public:
    std::array<TriPoly, 3> comp;

    PolyMap3() : comp{TriPoly(), TriPoly(), TriPoly()} {}
    explicit PolyMap3(std::array<TriPoly, 3> components) : comp(std::move(components)) {}

    static PolyMap3 identity() {
        PolyMap3 m({TriPoly::variable(0), TriPoly::variable(1), TriPoly::variable(2)});
        return m;
    }

    bool is_identity() const { return *this == identity(); }

    bool has_inverse() const { return static_cast<bool>(inverse_); }

    const PolyMap3& inverse() const {
        if (!inverse_) throw validation_error("map has no stored inverse");
        return *inverse_;
    }

    /// Attach an inverse after verifying both composition identities exactly.
    /// The stored inverse gets a one-level back-reference (no ownership cycle).
    void set_inverse(PolyMap3 inv) {
        inverse_.reset();
        if (!after(*this, inv).is_identity() || !after(inv, *this).is_identity())
            throw consistency_error("claimed inverse fails the composition identity");
        auto back = std::make_shared<PolyMap3>(*this);
        auto holder = std::make_shared<PolyMap3>(std::move(inv));
        holder->inverse_ = std::move(back);
        inverse_ = std::move(holder);
    }

    /// (f `after` g)(p) = f(g(p)).
    friend PolyMap3 after(const PolyMap3& f, const PolyMap3& g) {
        PolyMap3 r;
        for (int i = 0; i < 3; ++i) r.comp[static_cast<std::size_t>(i)] = f.comp[static_cast<std::size_t>(i)].substitute(g.comp);
        return r;
    }

    std::array<Rational, 3> eval(const std::array<Rational, 3>& p) const {
        return {comp[0].eval(p), comp[1].eval(p), comp[2].eval(p)};
    }

    std::array<double, 3> eval(const std::array<double, 3>& p) const {
        return {comp[0].eval(p), comp[1].eval(p), comp[2].eval(p)};
    }

    Mat3Poly jacobian() const {
        Mat3Poly j;
        for (std::size_t i = 0; i < 3; ++i)
            for (int a = 0; a < 3; ++a) j[i][static_cast<std::size_t>(a)] = comp[i].partial(a);
        return j;
    }

    friend bool operator==(const PolyMap3& a, const PolyMap3& b) { return a.comp == b.comp; }
    friend bool operator!=(const PolyMap3& a, const PolyMap3& b) { return !(a == b); }

private:
    std::shared_ptr<const PolyMap3> inverse_;
};

/// T^{-1} o F o T. Requires T to carry its inverse.
inline PolyMap3 conjugate(const PolyMap3& F, const PolyMap3& T) {
    if (!T.has_inverse()) throw validation_error("conjugation requires an invertible change of coordinates");
    PolyMap3 r = after(T.inverse(), after(F, T));
    return r;
}

/// Pushforward of a vector field under the change of coordinates q = T^{-1}(p):
/// new_field(q) = J(T^{-1})(T(q)) * field(T(q)). Exact for polynomial
/// automorphisms.
inline std::array<TriPoly, 3> pushforward_field(const std::array<TriPoly, 3>& field, const PolyMap3& T) {
    if (!T.has_inverse()) throw validation_error("pushforward requires an invertible change of coordinates");
    const Mat3Poly jinv = T.inverse().jacobian();
    std::array<TriPoly, 3> field_at_T;
    for (std::size_t i = 0; i < 3; ++i) field_at_T[i] = field[i].substitute(T.comp);
    std::array<TriPoly, 3> out;
    for (std::size_t i = 0; i < 3; ++i) {
        TriPoly acc;
        for (std::size_t k = 0; k < 3; ++k) acc = acc + jinv[i][k].substitute(T.comp) * field_at_T[k];
        out[i] = std::move(acc);
    }
    return out;
}

inline TriPoly mat3_trace(const Mat3Poly& m) { return m[0][0] + m[1][1] + m[2][2]; }

inline TriPoly mat3_det(const Mat3Poly& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Sum of the three principal 2x2 minors.
inline TriPoly mat3_minor2_sum(const Mat3Poly& m) {
    return (m[1][1] * m[2][2] - m[1][2] * m[2][1]) + (m[0][0] * m[2][2] - m[0][2] * m[2][0]) +
           (m[0][0] * m[1][1] - m[0][1] * m[1][0]);
}

inline Mat3Poly mat3_mul(const Mat3Poly& a, const Mat3Poly& b) {
    Mat3Poly r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            TriPoly acc;
            for (std::size_t k = 0; k < 3; ++k) acc = acc + a[i][k] * b[k][j];
            r[i][j] = std::move(acc);
        }
    return r;
}

inline bool mat3_is_zero(const Mat3Poly& m) {
    for (const auto& row : m)
        for (const auto& e : row)
            if (!e.is_zero()) return false;
    return true;
}

} // namespace nildyn
