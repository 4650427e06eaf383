#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nildyn/numeric_map.hpp"
#include "nildyn/roots.hpp"

namespace nildyn {

using ExactPoint = std::array<Rational, 3>;

inline NumPoint to_num(const ExactPoint& p) {
    return {to_double(p[0]), to_double(p[1]), to_double(p[2])};
}

struct OrbitPoint {
    std::optional<ExactPoint> exact;
    NumPoint num{};
    int index = 0;

    static OrbitPoint from_exact(ExactPoint p, int idx = 0) {
        OrbitPoint o;
        o.num = to_num(p);
        o.exact = std::move(p);
        o.index = idx;
        return o;
    }
    static OrbitPoint from_num(NumPoint p, int idx = 0) {
        OrbitPoint o;
        o.num = p;
        o.index = idx;
        return o;
    }
};

/// Orbit segment of length n+1 (start included). In float mode a numeric
/// blow-up flags divergence and returns the partial orbit.
inline std::vector<OrbitPoint> iterate(const PolyMap3& map, const OrbitPoint& start, int n,
                                       bool* diverged = nullptr) {
    if (diverged) *diverged = false;
    std::vector<OrbitPoint> orbit;
    orbit.reserve(static_cast<std::size_t>(n) + 1);
    orbit.push_back(start);
    orbit.front().index = 0;
    if (start.exact) {
        ExactPoint p = *start.exact;
        for (int k = 1; k <= n; ++k) {
            p = map.eval(p);
            orbit.push_back(OrbitPoint::from_exact(p, k));
        }
    } else {
        NumPoint p = start.num;
        for (int k = 1; k <= n; ++k) {
            p = map.eval(p);
            if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2]) ||
                num_norm(p) > 1e150) {
                if (diverged) *diverged = true;
                break;
            }
            orbit.push_back(OrbitPoint::from_num(p, k));
        }
    }
    return orbit;
}

/// Transport chains between the three coordinate frames used throughout:
/// original (x,y,z), Psi-conjugated (u,v,w), and (when deg P2 = 1) the fully
/// simplified (X,Y,Z).
struct Frames {
    PolyMap3 psi;                     // (u,v,w) -> (x,y,z)
    std::optional<Psi2Record> psi2;   // (X,Y,Z) -> (u,v,w)

    explicit Frames(const FieldParams& params) : psi(psi_automorphism(params)) {
        if (params.d2() == 1) psi2 = psi2_automorphism(params);
    }

    ExactPoint original_from_psi(const ExactPoint& p) const { return psi.eval(p); }
    NumPoint original_from_psi(const NumPoint& p) const { return psi.eval(p); }

    ExactPoint original_from_simplified(const ExactPoint& p) const {
        return psi.eval(psi2->map.eval(p));
    }
    NumPoint original_from_simplified(const NumPoint& p) const {
        return psi.eval(psi2->map.eval(p));
    }
    ExactPoint psi_from_original(const ExactPoint& p) const { return psi.inverse().eval(p); }
    ExactPoint simplified_from_psi(const ExactPoint& p) const {
        return psi2->map.inverse().eval(p);
    }
    NumPoint simplified_from_psi(const NumPoint& p) const { return psi2->map.inverse().eval(p); }
};

struct FixedPointResult {
    ExactPoint psi_frame{};                   // fixed point of the conjugated map
    std::optional<ExactPoint> simplified_frame; // (0, nu, nu) when deg P2 = 1
    ExactPoint original{};
};

/// The unique fixed point, exact in every frame.
inline FixedPointResult fixed_point(const FieldParams& params) {
    params.validate();
    FixedPointResult r;
    const Frames frames(params);
    if (params.d2() == 1) {
        const Rational nu = params.nu();
        r.simplified_frame = ExactPoint{Rational(0), nu, nu};
        r.psi_frame = frames.psi2->map.eval(*r.simplified_frame);
    } else {
        // a12 = 0 here, so the conjugated third component is constant.
        const Rational w0 = params.A3 + params.a20 / params.d2p2();
        const Rational v0 = params.P2.eval(w0) + params.a10;
        const Rational u0 = params.P1.eval(v0);
        r.psi_frame = ExactPoint{u0, v0, w0};
    }
    r.original = frames.original_from_psi(r.psi_frame);

    const PolyMap3 G = conjugated_map_closed_form(params);
    if (G.eval(r.psi_frame) != r.psi_frame)
        throw consistency_error("computed fixed point is not fixed by the conjugated map");
    const PolyMap3 F = build_field(params);
    if (F.eval(r.original) != r.original)
        throw consistency_error("computed fixed point is not fixed by the original map");
    return r;
}

struct NamedCheck {
    std::string name;
    bool pass = false;
};

/// Exact identity chain mirroring the no-2-cycle argument, plus a numeric
/// multi-start search on the second iterate whose every converged solution
/// must cluster at the fixed point.
struct TwoCycleCertificate {
    bool deg_p2_is_one = false;
    std::vector<NamedCheck> identities;
    bool symbolic_ok = false;
    std::vector<Cluster> clusters;
    NumPoint fixed_point_num{};
    double cluster_radius = 1e-6;
    bool numeric_ok = false;
};

/// Throws consistency_error if any numeric cluster sits away from the fixed
/// point (that would contradict the no-2-cycle statement).
inline void validate_two_cycle_clusters(const TwoCycleCertificate& cert) {
    for (const auto& c : cert.clusters) {
        if (num_dist(c.representative, cert.fixed_point_num) > cert.cluster_radius)
            throw consistency_error("numeric 2-cycle search converged away from the fixed point");
    }
}

inline TwoCycleCertificate certify_no_2cycles(const FieldParams& params,
                                              const NewtonOptions& newton_opt = NewtonOptions{}) {
    params.validate();
    TwoCycleCertificate cert;
    cert.deg_p2_is_one = (params.d2() == 1);
    cert.cluster_radius = newton_opt.cluster_radius;
    const FixedPointResult fp = fixed_point(params);

    auto push = [&cert](std::string name, bool pass) {
        cert.identities.push_back(NamedCheck{std::move(name), pass});
    };

    if (!cert.deg_p2_is_one) {
        // a12 = 0: the second iterate pins v and w to constants, and its first
        // component depends on w alone; substituting the pinned w gives u0.
        const PolyMap3 G = conjugated_map_closed_form(params);
        const PolyMap3 G2 = after(G, G);
        const auto& [u0, v0, w0] = fp.psi_frame;
        push("second iterate v-component is the constant v0",
             G2.comp[1] == TriPoly::constant(v0));
        push("second iterate w-component is the constant w0",
             G2.comp[2] == TriPoly::constant(w0));
        push("second iterate u-component depends on w only",
             G2.comp[0].degree_in(0) == 0 && G2.comp[0].degree_in(1) == 0);
        push("u-component at pinned w equals u0",
             G2.comp[0].eval(ExactPoint{Rational(0), Rational(0), w0}) == u0);
    } else {
        const PolyMap3 K = simplified_map_closed_form(params);
        const PolyMap3 K2 = after(K, K);
        const Rational nu = params.nu();
        const TriPoly X = TriPoly::variable(0);
        const TriPoly Y = TriPoly::variable(1);
        // On a 2-periodic orbit Y equals the third map component; the square
        // is symmetric in (Y, Z); with Y = Z the first component vanishes and
        // the third collapses to nu. Each step is an exact identity.
        push("second component of the second iterate equals the third map component",
             K2.comp[1] == K.comp[2]);
        const TriPoly swapped_sq =
            params.a12 * ((TriPoly::lift(params.P1, 2) - TriPoly::lift(params.P1, 1)) *
                          (TriPoly::lift(params.P1, 2) - TriPoly::lift(params.P1, 1))) +
            TriPoly::constant(nu);
        push("third component is symmetric under swapping Y and Z", swapped_sq == K.comp[2]);
        push("first component vanishes identically on {Y = Z}",
             K.comp[0].substitute({X, Y, Y}).is_zero());
        push("third component is the constant nu on {Y = Z}",
             K.comp[2].substitute({X, Y, Y}) == TriPoly::constant(nu));
        push("(0, nu, nu) is the fixed point",
             K.eval(ExactPoint{Rational(0), nu, nu}) == ExactPoint{Rational(0), nu, nu});
    }
    cert.symbolic_ok = true;
    for (const auto& c : cert.identities) cert.symbolic_ok = cert.symbolic_ok && c.pass;
    if (!cert.symbolic_ok)
        throw consistency_error("no-2-cycle identity chain failed symbolically");

    // Numeric side: Newton multi-start on G^2(p) - p in the Psi frame.
    const NumericMap3 G_num = numeric_from_polymap(conjugated_map_closed_form(params));
    const auto roots = newton_multistart_periodic(G_num, 2, newton_opt);
    cert.clusters = cluster_roots(roots, newton_opt.cluster_radius);
    cert.fixed_point_num = to_num(fp.psi_frame);
    validate_two_cycle_clusters(cert);
    cert.numeric_ok = true;
    return cert;
}

enum class CycleClass { attractor, saddle, marginal };

inline const char* to_string(CycleClass c) {
    switch (c) {
        case CycleClass::attractor: return "attractor";
        case CycleClass::saddle: return "saddle";
        default: return "marginal";
    }
}

struct Multiplier {
    std::optional<Rational> exact;
    double value = 0.0;
};

struct CycleReport {
    int length = 0;
    bool exact = false;
    std::vector<OrbitPoint> points_simplified; // (X,Y,Z) frame
    std::vector<OrbitPoint> points_original;   // (x,y,z) frame
    Multiplier L22;                            // closed form (3-cycles) or block spectral radius
    std::optional<Multiplier> L22_product;     // from the Jacobian product, when checked
    bool product_structure_ok = false;         // zero first column and zero (3,3) entry
    CycleClass classification = CycleClass::marginal;
    std::optional<Rational> s0_exact;
    double s0 = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline CycleClass classify_from_abs(double abs_val, double tol = 1e-12) {
    if (std::fabs(abs_val - 1.0) <= tol) return CycleClass::marginal;
    return abs_val < 1.0 ? CycleClass::attractor : CycleClass::saddle;
}

inline CycleClass classify_from_exact(const Rational& val) {
    const Rational a = nildyn::abs(val);
    if (a == 1) return CycleClass::marginal;
    return a < 1 ? CycleClass::attractor : CycleClass::saddle;
}

} // namespace detail

/// All 3-cycles obtained from the real roots s0 != nu of
/// h(s) = a12 (P1(s) - P1(nu))^2 + nu - s. Cycles with a rational s0 are
/// exact end to end. Requires deg P2 = 1 and deg A1 = 2.
inline std::vector<CycleReport> find_3cycle(const FieldParams& params) {
    params.validate();
    if (params.d2() != 1 || params.a12 == 0)
        throw validation_error("3-cycle search requires deg P2 = 1 and deg A1 = 2 (a12 != 0)");
    const Rational nu = params.nu();
    const Rational p1_nu = params.P1.eval(nu);
    const UniPoly s = UniPoly::variable();
    const UniPoly shift = params.P1 - UniPoly(p1_nu);
    const UniPoly h = params.a12 * (shift * shift) + UniPoly(nu) - s;

    if (h.eval(nu) != 0 || h.derivative().eval(nu) != -1)
        throw consistency_error("h(nu) = 0 / h'(nu) = -1 identity failed");

    // nu is a known simple root; deflate it exactly and isolate the rest.
    const auto [q, rem] = divmod(h, s - nu);
    if (!rem.is_zero()) throw consistency_error("deflation of h by (s - nu) left a remainder");

    const Frames frames(params);
    const PolyMap3 K = simplified_map_closed_form(params);
    const UniPoly dP1 = params.P1.derivative();

    std::vector<CycleReport> reports;
    if (q.degree() < 1) return reports;
    for (const auto& iv : isolate_real_roots(q)) {
        CycleReport rep;
        rep.length = 3;
        const auto exact_s0 = exact_rational_root(q, iv);
        if (exact_s0) {
            const Rational& s0 = *exact_s0;
            rep.exact = true;
            rep.s0_exact = s0;
            rep.s0 = to_double(s0);
            const Rational d = params.P1.eval(s0) - p1_nu;
            const ExactPoint p0{Rational(0), s0, nu};
            const ExactPoint p1{d, nu, s0};
            const ExactPoint p2{-d, s0, s0};
            rep.points_simplified = {OrbitPoint::from_exact(p0, 0), OrbitPoint::from_exact(p1, 1),
                                     OrbitPoint::from_exact(p2, 2)};
            for (const auto& p : {p0, p1, p2})
                rep.points_original.push_back(OrbitPoint::from_exact(
                    frames.original_from_simplified(p),
                    static_cast<int>(rep.points_original.size())));
            // L22 = 4 a12^2 (P1(s0)-P1(nu))^2 P1'(s0)^2, with the square
            // replaced through (P1(s0)-P1(nu))^2 = (s0-nu)/a12.
            const Rational dp = dP1.eval(s0);
            const Rational l22 = Rational(4) * params.a12 * (s0 - nu) * dp * dp;
            rep.L22 = Multiplier{l22, to_double(l22)};
            rep.classification = detail::classify_from_exact(l22);
            if (K.eval(p2) != p0) throw consistency_error("exact 3-cycle failed to close");
        } else {
            const Rational s0r = refine_root(iv, q, Rational(1, 1000000000000LL));
            const double s0 = to_double(s0r);
            rep.s0 = s0;
            const double p1s0 = params.P1.eval_double(s0);
            const double p1nu = to_double(p1_nu);
            const double d = p1s0 - p1nu;
            const NumPoint p0{0.0, s0, to_double(nu)};
            const NumPoint p1{d, to_double(nu), s0};
            const NumPoint p2{-d, s0, s0};
            rep.points_simplified = {OrbitPoint::from_num(p0, 0), OrbitPoint::from_num(p1, 1),
                                     OrbitPoint::from_num(p2, 2)};
            for (const auto& p : {p0, p1, p2})
                rep.points_original.push_back(OrbitPoint::from_num(
                    frames.original_from_simplified(p),
                    static_cast<int>(rep.points_original.size())));
            const double dp = dP1.eval_double(s0);
            const double l22 = 4.0 * to_double(params.a12) * (s0 - to_double(nu)) * dp * dp;
            rep.L22 = Multiplier{std::nullopt, l22};
            rep.classification = detail::classify_from_abs(std::fabs(l22));
        }
        reports.push_back(std::move(rep));
    }
    std::sort(reports.begin(), reports.end(),
              [](const CycleReport& a, const CycleReport& b) { return a.s0 < b.s0; });
    return reports;
}

/// Recompute the multiplier from the product of the three Jacobians of the
/// simplified map along the cycle; the product must have a zero first column
/// and a zero (3,3) entry, and its (2,2) entry must reproduce the closed-form
/// L22. Fills the cross-check fields and the final classification.
inline CycleReport classify_cycle(const FieldParams& params, CycleReport rep) {
    params.validate();
    if (rep.length != 3 || rep.points_simplified.size() != 3)
        throw validation_error("classify_cycle expects a verified 3-cycle");
    const PolyMap3 K = simplified_map_closed_form(params);
    const Mat3Poly J = K.jacobian();

    if (rep.exact) {
        std::array<std::array<std::array<Rational, 3>, 3>, 3> jmats;
        for (int t = 0; t < 3; ++t) {
            const ExactPoint& p = *rep.points_simplified[static_cast<std::size_t>(t)].exact;
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) jmats[static_cast<std::size_t>(t)][i][j] = J[i][j].eval(p);
        }
        // M = J(p2) J(p1) J(p0).
        auto mul = [](const auto& a, const auto& b) {
            std::array<std::array<Rational, 3>, 3> r;
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) {
                    Rational s(0);
                    for (std::size_t k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
                    r[i][j] = s;
                }
            return r;
        };
        const auto M = mul(jmats[2], mul(jmats[1], jmats[0]));
        rep.product_structure_ok = M[0][0] == 0 && M[1][0] == 0 && M[2][0] == 0 && M[2][2] == 0;
        rep.L22_product = Multiplier{M[1][1], to_double(M[1][1])};
        if (!rep.product_structure_ok)
            throw consistency_error("cycle Jacobian product lost its zero structure");
        if (!rep.L22.exact || *rep.L22.exact != M[1][1])
            throw consistency_error("closed-form L22 disagrees with the Jacobian product");
        rep.classification = detail::classify_from_exact(M[1][1]);
    } else {
        Mat3d prod{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
        for (int t = 0; t < 3; ++t) {
            const NumPoint& p = rep.points_simplified[static_cast<std::size_t>(t)].num;
            Mat3d jm{};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) jm[i][j] = J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(p);
            prod = mat3d_mul(jm, prod);
        }
        const double scale = std::max(1.0, std::fabs(rep.L22.value));
        rep.product_structure_ok = std::fabs(prod[0][0]) <= 1e-10 * scale &&
                                   std::fabs(prod[1][0]) <= 1e-10 * scale &&
                                   std::fabs(prod[2][0]) <= 1e-10 * scale &&
                                   std::fabs(prod[2][2]) <= 1e-10 * scale;
        rep.L22_product = Multiplier{std::nullopt, prod[1][1]};
        if (!rep.product_structure_ok)
            throw consistency_error("cycle Jacobian product lost its zero structure");
        if (std::fabs(prod[1][1] - rep.L22.value) > 1e-10 * scale)
            throw consistency_error("closed-form L22 disagrees with the Jacobian product");
        rep.classification = detail::classify_from_abs(std::fabs(prod[1][1]));
    }
    return rep;
}

/// Multi-start Newton search for m-cycles of the simplified map. Converged
/// candidates are filtered (fixed point, divisor periods), deduplicated by
/// cyclic rotation and verified by m-fold iteration. An empty result does not
/// certify absence. Requires deg P2 = 1 and 2 <= m <= 8.
inline std::vector<CycleReport> find_cycles_numeric(const FieldParams& params, int m,
                                                    const NewtonOptions& opt = NewtonOptions{}) {
    params.validate();
    if (params.d2() != 1)
        throw validation_error("numeric cycle search requires deg P2 = 1");
    if (m < 2 || m > 8)
        throw validation_error("cycle length must be between 2 and 8 (iterate degree explodes beyond)");

    const NumericMap3 K = numeric_simplified_map(params);
    const Frames frames(params);
    const auto roots = newton_multistart_periodic(K, m, opt);

    std::vector<std::vector<NumPoint>> orbits;
    for (const auto& root : roots) {
        // Minimal period must be exactly m.
        bool shorter = false;
        for (int d = 1; d < m; ++d) {
            if (m % d != 0) continue;
            if (num_dist(K.power(root.point, d), root.point) <= opt.cluster_radius) {
                shorter = true;
                break;
            }
        }
        if (shorter) continue;
        // Verification by m-fold iteration.
        if (num_dist(K.power(root.point, m), root.point) > 1e-10 * (1.0 + num_norm(root.point)))
            continue;
        std::vector<NumPoint> orbit{root.point};
        for (int i = 1; i < m; ++i) orbit.push_back(K.value(orbit.back()));
        // Canonical representative: rotation starting at the lexicographically
        // smallest point.
        std::size_t best = 0;
        for (std::size_t i = 1; i < orbit.size(); ++i) {
            const auto& a = orbit[i];
            const auto& b = orbit[best];
            if (std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end())) best = i;
        }
        std::rotate(orbit.begin(), orbit.begin() + static_cast<std::ptrdiff_t>(best), orbit.end());
        bool duplicate = false;
        for (const auto& known : orbits)
            if (num_dist(known.front(), orbit.front()) <= opt.cluster_radius) duplicate = true;
        if (!duplicate) orbits.push_back(std::move(orbit));
    }

    std::vector<CycleReport> reports;
    for (const auto& orbit : orbits) {
        CycleReport rep;
        rep.length = m;
        for (std::size_t i = 0; i < orbit.size(); ++i) {
            rep.points_simplified.push_back(OrbitPoint::from_num(orbit[i], static_cast<int>(i)));
            rep.points_original.push_back(
                OrbitPoint::from_num(frames.original_from_simplified(orbit[i]), static_cast<int>(i)));
        }
        // The product Jacobian always kills the first coordinate (the map does
        // not read X), so stability sits in the lower-right 2x2 block.
        const Mat3d M = K.power_jacobian(orbit.front(), m);
        const double tr = M[1][1] + M[2][2];
        const double det = M[1][1] * M[2][2] - M[1][2] * M[2][1];
        const double disc = tr * tr - 4.0 * det;
        double rho;
        if (disc >= 0) {
            const double sq = std::sqrt(disc);
            rho = std::max(std::fabs((tr + sq) / 2.0), std::fabs((tr - sq) / 2.0));
        } else {
            rho = std::sqrt(std::fabs(det));
        }
        rep.L22 = Multiplier{std::nullopt, rho};
        rep.classification = detail::classify_from_abs(rho, 1e-9);
        reports.push_back(std::move(rep));
    }
    return reports;
}

} // namespace nildyn
