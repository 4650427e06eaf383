#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "nildyn/continuous.hpp"
#include "nildyn/discrete.hpp"

namespace nildyn {

// ---------------------------------------------------------------------------
// mu-reduction of the deg P1 = deg P2 = 1, deg A1 = 2 family.
// ---------------------------------------------------------------------------

enum class MuCase { all_escape, cuspidal_surface, isochronous_surface };

inline const char* to_string(MuCase c) {
    switch (c) {
        case MuCase::all_escape: return "all_escape";
        case MuCase::cuspidal_surface: return "cuspidal_surface";
        default: return "isochronous_surface";
    }
}

struct ReductionRecord {
    Rational mu_exact{0};
    double mu = 0;
    MuCase classification = MuCase::all_escape;
    /// Exact affine change (u,v,w) -> (X,Y,Z) bringing the conjugated system
    /// to X' = Y, Y' = Z, Z' = Y^2 + mu; carries its inverse.
    PolyMap3 forward_change;
    std::optional<double> beta;       // mu = -beta^2 when mu < 0
    std::optional<double> time_scale; // tau = sqrt(beta) * t
};

/// Builds the linear change X = (a12 p1) u, Y = (a12 p1) P1(v),
/// Z = (a12 p1^2) P2(w), computes mu = A3 a12 p_{d2} p_{d1}^2 exactly and
/// classifies by its sign. The transformed field is verified symbolically.
inline ReductionRecord reduce(const FieldParams& params) {
    params.validate();
    if (params.d1() != 1 || params.d2() != 1)
        throw validation_error("mu-reduction requires deg P1 = deg P2 = 1");
    if (params.a12 == 0)
        throw validation_error(
            "a12 = 0: use the explicit cubic flow (all nontrivial trajectories escape)");

    ReductionRecord rec;
    rec.mu_exact = params.mu();
    rec.mu = to_double(rec.mu_exact);

    const Rational a12 = params.a12;
    const Rational p1 = params.p_lead1(), p10 = params.P1.coeff(0);
    const Rational p2 = params.p_lead2(), p20 = params.P2.coeff(0);
    const TriPoly u = TriPoly::variable(0);
    const TriPoly v = TriPoly::variable(1);
    const TriPoly w = TriPoly::variable(2);

    PolyMap3 fwd({(a12 * p1) * u, (a12 * p1) * (p1 * v + TriPoly::constant(p10)),
                  (a12 * p1 * p1) * (p2 * w + TriPoly::constant(p20))});
    const Rational c1 = Rational(1) / (a12 * p1);
    PolyMap3 inv({c1 * u, (Rational(1) / p1) * (c1 * v - TriPoly::constant(p10)),
                  (Rational(1) / p2) * ((c1 / p1) * w - TriPoly::constant(p20))});
    fwd.set_inverse(std::move(inv));

    // The transported conjugated field must be exactly (Y, Z, Y^2 + mu).
    const auto transported = pushforward_field(conjugated_field_closed_form(params), fwd.inverse());
    const std::array<TriPoly, 3> expected{
        TriPoly::variable(1), TriPoly::variable(2),
        TriPoly::variable(1) * TriPoly::variable(1) + TriPoly::constant(rec.mu_exact)};
    if (transported[0] != expected[0] || transported[1] != expected[1] ||
        transported[2] != expected[2])
        throw consistency_error("mu-reduction did not produce the normal-form field");

    rec.forward_change = std::move(fwd);
    const int s = sign(rec.mu_exact);
    rec.classification = s > 0   ? MuCase::all_escape
                         : s == 0 ? MuCase::cuspidal_surface
                                  : MuCase::isochronous_surface;
    if (s < 0) {
        rec.beta = std::sqrt(-rec.mu);
        rec.time_scale = std::sqrt(*rec.beta);
    }
    return rec;
}

/// Original (x,y,z) -> normal (X,Y,Z), numerically.
inline Vec3 original_to_normal(const FieldParams& params, const ReductionRecord& rec,
                               const Vec3& p) {
    const PolyMap3 psi_inv = psi_automorphism(params).inverse();
    return rec.forward_change.eval(psi_inv.eval(p));
}

inline Vec3 normal_to_original(const FieldParams& params, const ReductionRecord& rec,
                               const Vec3& p) {
    const PolyMap3 psi = psi_automorphism(params);
    return psi.eval(rec.forward_change.inverse().eval(p));
}

/// Normal-frame (X,Y,Z) -> scaled frame of the mu < 0 case:
/// x = X/sqrt(beta), y = Y/beta + 1, z = Z/beta^{3/2}, tau = sqrt(beta) t.
inline Vec3 normal_to_scaled(const ReductionRecord& rec, const Vec3& p) {
    const double b = *rec.beta;
    return {p[0] / std::sqrt(b), p[1] / b + 1.0, p[2] / (b * std::sqrt(b))};
}

inline Vec3 scaled_to_normal(const ReductionRecord& rec, const Vec3& p) {
    const double b = *rec.beta;
    return {p[0] * std::sqrt(b), (p[1] - 1.0) * b, p[2] * b * std::sqrt(b)};
}

// ---------------------------------------------------------------------------
// The scaled mu < 0 system and its section machinery.
// ---------------------------------------------------------------------------

/// x' = y - 1, y' = z, z' = y(y - 2).
struct ScaledSystemRhs {
    Vec3 operator()(const Vec3& s) const { return {s[1] - 1.0, s[2], s[1] * (s[1] - 2.0)}; }
};

/// Planar Hamiltonian of the scaled system: G(y,z) = y^2 + z^2/2 - y^3/3.
inline double scaled_energy(double y, double z) {
    return y * y + z * z / 2.0 - y * y * y / 3.0;
}

/// Energy of the normal-form system: H(X,Y,Z) = -mu Y + Z^2/2 - Y^3/3.
inline double normal_energy(double mu, const Vec3& p) {
    return -mu * p[1] + p[2] * p[2] / 2.0 - p[1] * p[1] * p[1] / 3.0;
}

/// Saddle energy of the scaled system; the period annulus is 0 < c < 4/3.
inline constexpr double kAnnulusTop = 4.0 / 3.0;

struct SectionPoint {
    double x = 0;
    double c = 0; // energy coordinate; the section point is (x, 0, sqrt(2c))
};

struct ReturnRecord {
    SectionPoint start;
    SectionPoint return_point;
    double return_time = 0; // tau(0, c)
    double displacement = 0; // L = return x - start x
    double c_drift = 0;
    bool transversal = true; // z > 0 at the accepted crossing
};

struct SectionCrossing {
    double tau = 0;
    Vec3 state{};
};

namespace detail {

/// Newton polish of an event time against the true flow (not the
/// interpolant): integrates from the segment start to the candidate time and
/// corrects with y/y'. Brings the crossing to integration accuracy.
template <class RHS>
SectionCrossing polish_crossing(RHS&& rhs, const StepRecord& seg, double t_guess, double tol) {
    IntegratorOptions opt;
    opt.tol = std::min(tol, 1e-12);
    opt.escape_radius = 1e300;
    double t = t_guess;
    Vec3 state = seg.eval(t);
    for (int it = 0; it < 4; ++it) {
        const double dt = t - seg.t0;
        if (dt <= 0) break;
        auto res = integrate_direction(rhs, seg.y0, dt, opt, [](const StepRecord&) {
            return StepControl::proceed;
        });
        state = res.y;
        const double ydot = state[2];
        if (ydot == 0) break;
        const double corr = state[1] / ydot;
        t -= corr;
        if (std::fabs(corr) < 1e-14 * std::max(1.0, std::fabs(t))) {
            if (std::fabs(state[1]) < 1e-13) break;
        }
    }
    return SectionCrossing{t, state};
}

} // namespace detail

/// First `count` upward crossings of the section {y = 0, z > 0} of the scaled
/// system, starting from `start` (crossings strictly after tau = 0). Crossing
/// times are located on the dense output by bisection to 1e-12 and then
/// polished against the flow itself.
inline std::vector<SectionCrossing> section_crossings(const Vec3& start, int count, double tol,
                                                      double t_cap) {
    const ScaledSystemRhs rhs;
    IntegratorOptions opt;
    opt.tol = tol;
    opt.escape_radius = 1e6;
    std::vector<SectionCrossing> out;

    auto handle = [&](const StepRecord& seg) {
        if (!(seg.y0[1] < 0.0 && seg.y1[1] >= 0.0)) return StepControl::proceed;
        // Bisect the Hermite interpolant for the sign change.
        double lo = seg.t0, hi = seg.t1;
        for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, std::fabs(hi)); ++i) {
            const double mid = 0.5 * (lo + hi);
            (seg.eval(mid)[1] < 0.0 ? lo : hi) = mid;
        }
        SectionCrossing crossing = detail::polish_crossing(rhs, seg, 0.5 * (lo + hi), tol);
        if (crossing.state[2] <= 0.0) return StepControl::proceed; // not the z > 0 branch
        out.push_back(crossing);
        return out.size() >= static_cast<std::size_t>(count) ? StepControl::stop
                                                             : StepControl::proceed;
    };
    integrate_direction(rhs, start, t_cap, opt, handle);
    return out;
}

/// Poincare return map of the scaled system on {y = 0, z > 0}, parametrized
/// by (x, c) with z = sqrt(2c). Requires 0 < c < 4/3 (strictly inside the
/// period annulus). `tol` is the integrator tolerance.
inline ReturnRecord return_map(double c, double x, double tol = 1e-12) {
    if (!(c > 0.0 && c < kAnnulusTop))
        throw validation_error("section energy must lie strictly inside (0, 4/3)");
    const double z0 = std::sqrt(2.0 * c);
    // Period diverges like -log(4/3 - c) at the homoclinic boundary; scale the
    // cap accordingly.
    const double t_cap =
        std::max(200.0, 80.0 - 40.0 * std::log10(std::max(kAnnulusTop - c, 1e-15)));
    const auto crossings = section_crossings({x, 0.0, z0}, 1, tol, t_cap);
    if (crossings.empty())
        throw consistency_error("left period annulus: no section return within the time cap");

    const auto& cr = crossings.front();
    ReturnRecord rec;
    rec.start = SectionPoint{x, c};
    const double c_ret = scaled_energy(cr.state[1], cr.state[2]);
    rec.return_point = SectionPoint{cr.state[0], c_ret};
    rec.return_time = cr.tau;
    rec.displacement = cr.state[0] - x;
    rec.c_drift = std::fabs(c_ret - c);
    rec.transversal = cr.state[2] > 0.0;
    return rec;
}

struct ProfileSummary {
    std::vector<ReturnRecord> records;
    int sign_changes = 0;                 // over the whole grid
    int monotonicity_violations = 0;      // on the part of the grid above 2/3
    double noise_floor = 1e-8;
};

/// L(0, c) sampled over a grid of energies.
inline ProfileSummary displacement_profile(const std::vector<double>& c_grid, double tol = 1e-12) {
    ProfileSummary s;
    for (double c : c_grid) s.records.push_back(return_map(c, 0.0, tol));
    for (std::size_t i = 1; i < s.records.size(); ++i) {
        const double prev = s.records[i - 1].displacement;
        const double cur = s.records[i].displacement;
        if ((prev < 0) != (cur < 0)) ++s.sign_changes;
        if (s.records[i - 1].start.c > 2.0 / 3.0 && cur < prev - s.noise_floor)
            ++s.monotonicity_violations;
    }
    return s;
}

struct CStarResult {
    double c_star = 0;
    double z_star = 0;        // sqrt(2 c*): the section height of the periodic orbit
    double bracket_width = 0; // final bisection bracket
    double residual_L = 0;    // |L(0, c*)|
    double return_time = 0;   // tau(0, c*)
};

/// Bisection on the sign of L(0, c) over (2/3, 4/3). The bracket is refined
/// to width <= tol_c and then further (down to 1e-13) until the displacement
/// residual is at most 1e-9, so that orbits launched at c* close to well below
/// the 1e-6 closure tolerance used downstream.
inline CStarResult find_cstar(double tol_c = 1e-6, double tol = 1e-12) {
    double lo = 2.0 / 3.0 + 1e-3;
    double hi = kAnnulusTop - 1e-3;
    ReturnRecord rl = return_map(lo, 0.0, tol);
    ReturnRecord rh = return_map(hi, 0.0, tol);
    if (!(rl.displacement < 0.0 && rh.displacement > 0.0))
        throw consistency_error("displacement has no sign change over (2/3, 4/3)");

    double mid = 0.5 * (lo + hi);
    ReturnRecord rm = rl;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        rm = return_map(mid, 0.0, tol);
        if (rm.displacement < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        const double width = hi - lo;
        if (width <= tol_c && (std::fabs(rm.displacement) <= 1e-9 || width <= 1e-13)) break;
    }
    CStarResult r;
    r.c_star = 0.5 * (lo + hi);
    r.z_star = std::sqrt(2.0 * r.c_star);
    r.bracket_width = hi - lo;
    r.residual_L = std::fabs(rm.displacement);
    r.return_time = rm.return_time;
    return r;
}

struct IsochronySample {
    double x = 0;
    double closure_residual = 0;
    double period = 0;
    bool closed = false;
};

struct IsochronyReport {
    std::vector<IsochronySample> samples;
    bool all_closed = false;
    double period_spread = 0;
    double common_period = 0;
    double closure_tol = 1e-6;
    double period_tol = 1e-8;
};

/// Launches orbits from (x, 0, sqrt(2 c*)) for each offset and checks that
/// each one closes and that all periods agree.
inline IsochronyReport verify_isochronous_surface(double c_star, const std::vector<double>& x_samples,
                                                  double tol = 1e-12) {
    IsochronyReport rep;
    const double z0 = std::sqrt(2.0 * c_star);
    double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
    for (double x : x_samples) {
        const auto rr = return_map(c_star, x, tol);
        IsochronySample s;
        s.x = x;
        s.period = rr.return_time;
        const double dz = std::sqrt(2.0 * rr.return_point.c) - z0;
        s.closure_residual = std::sqrt(rr.displacement * rr.displacement + dz * dz);
        s.closed = s.closure_residual <= rep.closure_tol;
        tmin = std::min(tmin, s.period);
        tmax = std::max(tmax, s.period);
        rep.samples.push_back(s);
    }
    rep.all_closed = !rep.samples.empty();
    for (const auto& s : rep.samples) rep.all_closed = rep.all_closed && s.closed;
    rep.period_spread = rep.samples.empty() ? 0.0 : tmax - tmin;
    rep.common_period = rep.samples.empty() ? 0.0 : 0.5 * (tmin + tmax);
    return rep;
}

// ---------------------------------------------------------------------------
// Planar critical points of the separable Hamiltonians used here.
// ---------------------------------------------------------------------------

enum class CriticalType { center, saddle, degenerate };

inline const char* to_string(CriticalType t) {
    switch (t) {
        case CriticalType::center: return "center";
        case CriticalType::saddle: return "saddle";
        default: return "degenerate";
    }
}

struct CriticalPoint {
    double v = 0, w = 0;
    std::optional<Rational> v_exact, w_exact;
    CriticalType type = CriticalType::degenerate;
    double energy = 0;
};

namespace detail {

struct AxisRoot {
    double value;
    std::optional<Rational> exact;
    int classifier_sign; // sign of the second derivative factor at the root
};

inline std::vector<AxisRoot> axis_roots(const UniPoly& gradient, const UniPoly& classifier) {
    std::vector<AxisRoot> out;
    if (gradient.is_zero())
        throw validation_error("planar Hamiltonian is degenerate along a whole axis");
    if (gradient.degree() < 1) return out; // nonzero constant: no critical values
    for (const auto& iv : isolate_real_roots(gradient)) {
        AxisRoot r{};
        r.classifier_sign = sign_at_root(classifier, gradient, iv);
        if (auto ex = exact_rational_root(gradient, iv)) {
            r.exact = *ex;
            r.value = to_double(*ex);
        } else {
            r.value = to_double(refine_root(iv, gradient, Rational(1, 1000000000000LL)));
        }
        out.push_back(r);
    }
    return out;
}

} // namespace detail

/// Critical points of a separable planar Hamiltonian G with G_v depending on
/// v only and G_w on w only. Classified by the sign of det Hess = G_vv G_ww:
/// positive -> center, negative -> saddle, zero -> degenerate (reported, not
/// guessed).
inline std::vector<CriticalPoint> critical_points_separable(
    const UniPoly& G_v, const UniPoly& G_w, const TriPoly& G_as_vw /* bivariate in (v, w) axes 1,2 */) {
    const auto vroots = detail::axis_roots(G_v, G_v.derivative());
    const auto wroots = detail::axis_roots(G_w, G_w.derivative());
    std::vector<CriticalPoint> pts;
    for (const auto& vr : vroots) {
        for (const auto& wr : wroots) {
            CriticalPoint p;
            p.v = vr.value;
            p.w = wr.value;
            p.v_exact = vr.exact;
            p.w_exact = wr.exact;
            const int det_sign = vr.classifier_sign * wr.classifier_sign;
            p.type = det_sign > 0   ? CriticalType::center
                     : det_sign < 0 ? CriticalType::saddle
                                    : CriticalType::degenerate;
            p.energy = G_as_vw.eval(std::array<double, 3>{0.0, p.v, p.w});
            pts.push_back(p);
        }
    }
    std::sort(pts.begin(), pts.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        return a.v != b.v ? a.v < b.v : a.w < b.w;
    });
    return pts;
}

/// Critical points of the (v, w) Hamiltonian of the conjugated system:
/// G(v,w) = int P2 dw - (a12/(d2 p_{d2})) int P1^2 dv - A3 v.
inline std::vector<CriticalPoint> planar_critical_points(const FieldParams& params) {
    params.validate();
    const Rational coef = params.a12 / params.d2p2();
    const UniPoly G_v = -(coef * (params.P1 * params.P1)) - UniPoly(params.A3);
    const UniPoly& G_w = params.P2;
    const TriPoly G = TriPoly::lift(params.P2.antiderivative(), 2) -
                      coef * TriPoly::lift((params.P1 * params.P1).antiderivative(), 1) -
                      params.A3 * TriPoly::variable(1);
    return critical_points_separable(G_v, G_w, G);
}

/// Critical points of the scaled planar system: (0,0) center, (2,0) saddle.
inline std::vector<CriticalPoint> planar_critical_points_scaled() {
    const UniPoly y = UniPoly::variable();
    const UniPoly G_y = Rational(2) * y - y * y; // d/dy (y^2 - y^3/3)
    const UniPoly G_z = y;                       // d/dz (z^2/2), same shape in z
    const TriPoly G = TriPoly::monomial(Rational(1), 0, 2, 0) +
                      TriPoly::monomial(Rational(1, 2), 0, 0, 2) +
                      TriPoly::monomial(Rational(-1, 3), 0, 3, 0);
    return critical_points_separable(G_y, G_z, G);
}

// ---------------------------------------------------------------------------
// Whole-trajectory classification per the mu cases.
// ---------------------------------------------------------------------------

enum class TrajectoryKind {
    escapes_both_directions,
    on_cuspidal_surface,
    on_periodic_surface,
    escapes_off_surface,
    equilibrium
};

inline const char* to_string(TrajectoryKind k) {
    switch (k) {
        case TrajectoryKind::escapes_both_directions: return "escapes_both_directions";
        case TrajectoryKind::on_cuspidal_surface: return "on_cuspidal_surface";
        case TrajectoryKind::on_periodic_surface: return "on_periodic_surface";
        case TrajectoryKind::escapes_off_surface: return "escapes (off-surface)";
        default: return "equilibrium";
    }
}

struct TrajectoryClassification {
    TrajectoryKind kind = TrajectoryKind::escapes_both_directions;
    std::optional<double> mu;
    std::optional<MuCase> mu_case;
    std::optional<double> energy;        // H level in the relevant reduced frame
    std::optional<double> c_scaled;      // energy in the scaled frame (mu < 0)
    std::optional<double> c_star;
    std::optional<double> one_return_displacement;
    std::optional<Outcome> window_outcome;
    double max_norm_seen = 0;
    double window = 200;
    double escape_radius = 1e6;
    std::string evidence;
};

/// Window-bounded evidence: integrate the original field both directions.
inline void attach_window_evidence(const FieldParams& params, const Vec3& start,
                                   TrajectoryClassification& out) {
    const CompiledField rhs(build_field(params).comp);
    IntegratorOptions opt;
    opt.tol = 1e-10;
    opt.escape_radius = out.escape_radius;
    const Trajectory traj = integrate_window(rhs, start, -out.window, out.window, opt);
    out.window_outcome = traj.outcome;
    for (const auto& [t, y] : traj.samples) out.max_norm_seen = std::max(out.max_norm_seen, vec_norm(y));
}

/// Route a single start through the Proposition-3 case analysis. Everything
/// asymptotic is reported as window-capped numeric evidence only.
inline TrajectoryClassification classify_trajectory(const FieldParams& params, const Vec3& start,
                                                    double closure_tol = 1e-6) {
    params.validate();
    if (params.d1() != 1 || params.d2() != 1)
        throw validation_error("trajectory classification requires deg P1 = deg P2 = 1");

    TrajectoryClassification out;
    const PolyMap3 F = build_field(params);
    const bool stationary = vec_norm(F.eval(start)) == 0.0;

    if (params.a12 == 0) {
        if (stationary) {
            out.kind = TrajectoryKind::equilibrium;
            out.evidence = "the field vanishes at the start point";
            return out;
        }
        out.kind = TrajectoryKind::escapes_both_directions;
        attach_window_evidence(params, start, out);
        out.evidence =
            "closed-form flow is cubic/quadratic/linear in t with a nonzero leading "
            "coefficient; window-capped integration attached";
        return out;
    }

    const ReductionRecord rec = reduce(params);
    out.mu = rec.mu;
    out.mu_case = rec.classification;
    const Vec3 normal = original_to_normal(params, rec, start);
    out.energy = normal_energy(rec.mu, normal);

    switch (rec.classification) {
        case MuCase::all_escape: {
            out.kind = TrajectoryKind::escapes_both_directions;
            attach_window_evidence(params, start, out);
            out.evidence = "mu > 0: no singular points, all level surfaces simply connected";
            return out;
        }
        case MuCase::cuspidal_surface: {
            // Every equilibrium sits on the cusp line (Y = Z = 0) inside this
            // surface, so equilibria are classified as on-surface here.
            const double scale = std::max(1.0, vec_norm(normal));
            if (std::fabs(*out.energy) <= 1e-9 * scale) {
                out.kind = TrajectoryKind::on_cuspidal_surface;
                out.evidence = stationary
                                   ? "mu = 0: start is an equilibrium on the invariant cusp line"
                                   : "mu = 0: start lies on the singular level H = 0 (cuspidal surface)";
            } else {
                out.kind = TrajectoryKind::escapes_both_directions;
                attach_window_evidence(params, start, out);
                out.evidence = "mu = 0: start is off the cuspidal surface H = 0";
            }
            return out;
        }
        case MuCase::isochronous_surface:
            break;
    }

    // mu < 0: decide membership of the period-annulus cylinders in the scaled
    // frame, then measure one full return.
    const Vec3 scaled = normal_to_scaled(rec, normal);
    const double c = scaled_energy(scaled[1], scaled[2]);
    out.c_scaled = c;
    out.c_star = find_cstar(1e-6).c_star;

    const bool on_oval = c > 0.0 && c < kAnnulusTop && scaled[1] < 2.0;
    if (!on_oval) {
        out.kind = TrajectoryKind::escapes_off_surface;
        attach_window_evidence(params, start, out);
        out.evidence = "mu < 0: start is outside the period-annulus cylinders";
        return out;
    }

    // Two successive section crossings give one full return at this energy
    // whether or not the start already sits on the section.
    const auto crossings = section_crossings(scaled, 2, 1e-12, 400.0);
    if (crossings.size() < 2) {
        out.kind = TrajectoryKind::escapes_off_surface;
        attach_window_evidence(params, start, out);
        out.evidence = "mu < 0: orbit failed to return to the section within the cap";
        return out;
    }
    const double L = crossings[1].state[0] - crossings[0].state[0];
    out.one_return_displacement = L;
    if (std::fabs(L) <= closure_tol) {
        out.kind = TrajectoryKind::on_periodic_surface;
        out.evidence = "mu < 0: one-return displacement within closure tolerance at c = c*";
    } else {
        out.kind = TrajectoryKind::escapes_off_surface;
        out.evidence = std::string("mu < 0: orbit drifts along the cylinder axis (L ") +
                       (L > 0 ? "> 0, +x direction)" : "< 0, -x direction)");
    }
    return out;
}

} // namespace nildyn
