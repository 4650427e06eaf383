// nildyn command-line front end: every analysis as a subcommand over a shared
// parameter-file schema, JSON report on stdout, CSV data tables via --out.
// Exit codes: 0 success, 1 usage/validation, 2 internal consistency failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nildyn/bundled.hpp"
#include "nildyn/continuous.hpp"
#include "nildyn/discrete.hpp"
#include "nildyn/params_io.hpp"
#include "nildyn/poincare.hpp"

namespace {

using namespace nildyn;

ordered_json jnum(double x) { return ordered_json(round15(x)); }

ordered_json jpoint(const NumPoint& p) { return ordered_json{jnum(p[0]), jnum(p[1]), jnum(p[2])}; }

ordered_json jpoint(const ExactPoint& p) {
    return ordered_json{to_string(p[0]), to_string(p[1]), to_string(p[2])};
}

ordered_json jorbit_point(const OrbitPoint& p) {
    ordered_json j;
    if (p.exact) j["exact"] = jpoint(*p.exact);
    j["numeric"] = jpoint(p.num);
    return j;
}

const std::array<std::string, 3> kXYZ{"x", "y", "z"};
const std::array<std::string, 3> kUVW{"u", "v", "w"};
const std::array<std::string, 3> kBigXYZ{"X", "Y", "Z"};

struct Cli {
    std::string params_path;
    std::string out_path;
    double tol = -1; // command-specific default when negative
    unsigned long long seed = 20240601ull;
    int starts = 100;
    bool exact = false;
    bool timings = false;
    std::string inject_fault;

    // per-command extras
    std::string start_text;
    std::string tspan_text = "0,50";
    std::string box_text;
    int steps = 10;
    int length = 3;
    int grid = 100;
    bool find_cstar_flag = false;
    double orbit_c = -1;
    double x0 = 0;
    double level = 0;
    std::string frame = "conjugated";
};

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw validation_error("cannot open output file: " + path);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }
    void row_nums(const std::vector<double>& vals, const std::vector<std::string>& prefix = {}) {
        std::vector<std::string> cells = prefix;
        for (double v : vals) cells.push_back(fmt15(v));
        row(cells);
    }

private:
    std::ofstream out_;
};

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
}

Vec3 parse_start_num(const std::string& text) {
    const auto parts = split_commas(text);
    if (parts.size() != 3) throw validation_error("--start: expected x,y,z");
    Vec3 v{};
    for (int i = 0; i < 3; ++i) {
        try {
            v[static_cast<std::size_t>(i)] = std::stod(parts[static_cast<std::size_t>(i)]);
        } catch (const std::exception&) {
            throw validation_error("--start: invalid number '" + parts[static_cast<std::size_t>(i)] + "'");
        }
    }
    return v;
}

ExactPoint parse_start_exact(const std::string& text) {
    const auto parts = split_commas(text);
    if (parts.size() != 3) throw validation_error("--start: expected x,y,z");
    ExactPoint p;
    for (int i = 0; i < 3; ++i) {
        auto q = parse_rational(parts[static_cast<std::size_t>(i)]);
        if (!q) throw validation_error("--start: invalid rational '" + parts[static_cast<std::size_t>(i)] + "'");
        p[static_cast<std::size_t>(i)] = *q;
    }
    return p;
}

struct Report {
    ordered_json doc;
    std::vector<std::pair<std::string, bool>> verdicts;

    void verdict(const std::string& name, bool pass) { verdicts.emplace_back(name, pass); }
};

void emit_report(const std::string& command, const std::optional<LoadedParams>& lp, Report& rep,
                 const Cli& cli, double elapsed_ms) {
    ordered_json out;
    out["command"] = command;
    out["schema_version"] = "1";
    out["input_digest"] = lp ? ordered_json(lp->digest) : ordered_json(nullptr);
    out["results"] = rep.doc;
    ordered_json diag;
    if (cli.tol > 0) diag["tol"] = jnum(cli.tol);
    diag["seed"] = cli.seed;
    diag["exact"] = cli.exact;
    if (cli.timings) diag["runtime_ms"] = jnum(elapsed_ms);
    out["diagnostics"] = diag;
    ordered_json verdicts = ordered_json::array();
    for (const auto& [name, pass] : rep.verdicts)
        verdicts.push_back(ordered_json{{"name", name}, {"pass", pass}});
    out["verdicts"] = verdicts;
    std::cout << out.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

Report cmd_nilcheck(const LoadedParams& lp, const Cli& cli) {
    Report rep;
    const PolyMap3 F = build_field(lp.params);
    NilpotencyReport nil = check_nilpotent(F);
    if (cli.inject_fault == "nilpotency-mismatch") {
        nil.cube_vanishes = !nil.cube_vanishes; // corrupted on purpose (test hook)
        if (nil.char_coeffs_vanish != nil.cube_vanishes)
            throw consistency_error("nilpotency cross-check mismatch (injected)");
    }
    rep.doc["field"] = ordered_json{{"F1", F.comp[0].to_string(kXYZ)},
                                    {"F2", F.comp[1].to_string(kXYZ)},
                                    {"F3", F.comp[2].to_string(kXYZ)}};
    rep.doc["trace"] = nil.trace.to_string(kXYZ);
    rep.doc["minor2_sum"] = nil.minor2_sum.to_string(kXYZ);
    rep.doc["determinant"] = nil.det.to_string(kXYZ);
    rep.verdict("nilpotent", nil.verdict);
    rep.verdict("characteristic_coefficients_vanish", nil.char_coeffs_vanish);
    rep.verdict("jacobian_cube_vanishes", nil.cube_vanishes);
    return rep;
}

Report cmd_normalize(const LoadedParams& lp, const Cli&) {
    Report rep;
    const FieldParams& p = lp.params;
    const PolyMap3 F = build_field(p);
    const PolyMap3 psi = psi_automorphism(p);
    const PolyMap3 G = conjugated_map_closed_form(p);
    const auto Gfield = conjugated_field_closed_form(p);

    rep.doc["field"] = ordered_json{{"F1", F.comp[0].to_string(kXYZ)},
                                    {"F2", F.comp[1].to_string(kXYZ)},
                                    {"F3", F.comp[2].to_string(kXYZ)}};
    rep.doc["psi"] = ordered_json{{"x", psi.comp[0].to_string(kUVW)},
                                  {"y", psi.comp[1].to_string(kUVW)},
                                  {"z", psi.comp[2].to_string(kUVW)}};
    rep.doc["psi_inverse"] = ordered_json{{"u", psi.inverse().comp[0].to_string(kXYZ)},
                                          {"v", psi.inverse().comp[1].to_string(kXYZ)},
                                          {"w", psi.inverse().comp[2].to_string(kXYZ)}};
    rep.doc["conjugated_map"] = ordered_json{{"u", G.comp[0].to_string(kUVW)},
                                             {"v", G.comp[1].to_string(kUVW)},
                                             {"w", G.comp[2].to_string(kUVW)}};
    rep.doc["conjugated_field"] = ordered_json{{"u'", Gfield[0].to_string(kUVW)},
                                               {"v'", Gfield[1].to_string(kUVW)},
                                               {"w'", Gfield[2].to_string(kUVW)}};
    rep.verdict("conjugation_matches_closed_form", conjugate(F, psi) == G);

    if (p.d2() == 1) {
        const Psi2Record psi2 = psi2_automorphism(p);
        const PolyMap3 K = simplified_map_closed_form(p);
        rep.doc["alpha"] = to_string(psi2.alpha);
        rep.doc["nu"] = to_string(psi2.nu);
        rep.doc["psi2"] = ordered_json{{"u", psi2.map.comp[0].to_string(kBigXYZ)},
                                       {"v", psi2.map.comp[1].to_string(kBigXYZ)},
                                       {"w", psi2.map.comp[2].to_string(kBigXYZ)}};
        rep.doc["simplified_map"] = ordered_json{{"X", K.comp[0].to_string(kBigXYZ)},
                                                 {"Y", K.comp[1].to_string(kBigXYZ)},
                                                 {"Z", K.comp[2].to_string(kBigXYZ)}};
        rep.verdict("second_conjugation_matches_closed_form", conjugate(G, psi2.map) == K);
    }
    if (p.d1() == 1 && p.d2() == 1 && p.a12 != 0) {
        const ReductionRecord rec = reduce(p);
        ordered_json red;
        red["mu"] = ordered_json{{"exact", to_string(rec.mu_exact)}, {"value", jnum(rec.mu)}};
        red["classification"] = to_string(rec.classification);
        if (rec.beta) red["beta"] = jnum(*rec.beta);
        rep.doc["reduction"] = red;
    }
    rep.doc["notes"] = "branch condition used throughout: deg A1 <= 1 iff a12 = 0";
    return rep;
}

Report cmd_fixed_point(const LoadedParams& lp, const Cli&) {
    Report rep;
    const FixedPointResult fp = fixed_point(lp.params);
    rep.doc["psi_frame"] = ordered_json{{"exact", jpoint(fp.psi_frame)},
                                        {"numeric", jpoint(to_num(fp.psi_frame))}};
    if (fp.simplified_frame)
        rep.doc["simplified_frame"] = ordered_json{{"exact", jpoint(*fp.simplified_frame)},
                                                   {"numeric", jpoint(to_num(*fp.simplified_frame))}};
    rep.doc["original"] = ordered_json{{"exact", jpoint(fp.original)},
                                       {"numeric", jpoint(to_num(fp.original))}};
    rep.verdict("fixed_by_original_map", build_field(lp.params).eval(fp.original) == fp.original);
    rep.verdict("fixed_by_conjugated_map",
                conjugated_map_closed_form(lp.params).eval(fp.psi_frame) == fp.psi_frame);
    return rep;
}

ordered_json cycle_to_json(const CycleReport& c) {
    ordered_json j;
    j["length"] = c.length;
    j["exact"] = c.exact;
    if (!std::isnan(c.s0)) {
        j["s0"] = jnum(c.s0);
        if (c.s0_exact) j["s0_exact"] = to_string(*c.s0_exact);
    }
    ordered_json mult;
    mult["value"] = jnum(c.L22.value);
    if (c.L22.exact) mult["exact"] = to_string(*c.L22.exact);
    j["L22"] = mult;
    if (c.L22_product) j["L22_product"] = jnum(c.L22_product->value);
    j["product_structure_ok"] = c.product_structure_ok;
    j["classification"] = to_string(c.classification);
    ordered_json simp = ordered_json::array(), orig = ordered_json::array();
    for (const auto& p : c.points_simplified) simp.push_back(jorbit_point(p));
    for (const auto& p : c.points_original) orig.push_back(jorbit_point(p));
    j["points_simplified"] = simp;
    j["points_original"] = orig;
    return j;
}

Report cmd_cycles(const LoadedParams& lp, const Cli& cli) {
    Report rep;
    const FieldParams& p = lp.params;
    rep.doc["length"] = cli.length;
    ordered_json cycles = ordered_json::array();

    if (cli.length == 2) {
        NewtonOptions opt;
        opt.seed = cli.seed;
        opt.starts = cli.starts;
        TwoCycleCertificate cert = certify_no_2cycles(p, opt);
        if (cli.inject_fault == "two-cycle-ghost") {
            cert.clusters.push_back(Cluster{{1e9, 1e9, 1e9}, 1}); // corrupted on purpose
            validate_two_cycle_clusters(cert);
        }
        ordered_json identities = ordered_json::array();
        for (const auto& c : cert.identities)
            identities.push_back(ordered_json{{"name", c.name}, {"pass", c.pass}});
        ordered_json clusters = ordered_json::array();
        for (const auto& c : cert.clusters)
            clusters.push_back(ordered_json{{"point", jpoint(c.representative)}, {"hits", c.hits}});
        rep.doc["certificate"] = ordered_json{{"identities", identities},
                                              {"newton_clusters", clusters},
                                              {"fixed_point", jpoint(cert.fixed_point_num)}};
        rep.doc["cycles"] = cycles;
        rep.verdict("no_2cycles_symbolic", cert.symbolic_ok);
        rep.verdict("no_2cycles_numeric", cert.numeric_ok);
        return rep;
    }

    if (p.a12 == 0) {
        rep.doc["cycles"] = cycles;
        rep.doc["note"] =
            "deg A1 <= 1: every orbit lands on the fixed point after three iterations; "
            "no nontrivial cycles exist";
        rep.verdict("cycles_found", false);
        return rep;
    }

    if (cli.length == 3) {
        const Rational nu = p.nu();
        const UniPoly s = UniPoly::variable();
        const UniPoly shift = p.P1 - UniPoly(p.P1.eval(nu));
        const UniPoly h = p.a12 * (shift * shift) + UniPoly(nu) - s;
        rep.doc["h_polynomial"] = h.to_string();
        rep.doc["nu"] = to_string(nu);
        for (auto& c : find_3cycle(p)) cycles.push_back(cycle_to_json(classify_cycle(p, c)));
        rep.doc["cycles"] = cycles;
        rep.verdict("cycles_found", !cycles.empty());
        rep.verdict("h_has_root_nu", h.eval(nu) == 0);
        return rep;
    }

    NewtonOptions opt;
    opt.seed = cli.seed;
    opt.starts = cli.starts;
    for (auto& c : find_cycles_numeric(p, cli.length, opt)) cycles.push_back(cycle_to_json(c));
    rep.doc["cycles"] = cycles;
    rep.doc["absence_certified"] = false; // a numeric miss never certifies absence
    rep.verdict("cycles_found", !cycles.empty());
    return rep;
}

Report cmd_iterate(const LoadedParams& lp, const Cli& cli) {
    Report rep;
    const FieldParams& p = lp.params;
    const PolyMap3 F = build_field(p);
    const Frames frames(p);
    const bool simplified = p.d2() == 1;

    OrbitPoint start = cli.exact ? OrbitPoint::from_exact(parse_start_exact(cli.start_text))
                                 : OrbitPoint::from_num(parse_start_num(cli.start_text));
    bool diverged = false;
    const auto orbit = iterate(F, start, cli.steps, &diverged);

    auto conj_of = [&](const OrbitPoint& op) -> OrbitPoint {
        if (op.exact) {
            ExactPoint q = frames.psi_from_original(*op.exact);
            if (simplified) q = frames.simplified_from_psi(q);
            return OrbitPoint::from_exact(q, op.index);
        }
        NumPoint q = frames.psi.inverse().eval(op.num);
        if (simplified) q = frames.simplified_from_psi(q);
        return OrbitPoint::from_num(q, op.index);
    };

    if (!cli.out_path.empty()) {
        CsvWriter csv(cli.out_path);
        csv.row({"k", "x", "y", "z", "X", "Y", "Z"});
        for (const auto& op : orbit) {
            const OrbitPoint cq = conj_of(op);
            std::vector<std::string> cells{std::to_string(op.index)};
            if (op.exact) {
                for (const auto& c : *op.exact) cells.push_back(to_string(c));
                for (const auto& c : *cq.exact) cells.push_back(to_string(c));
            } else {
                for (double c : op.num) cells.push_back(fmt15(c));
                for (double c : cq.num) cells.push_back(fmt15(c));
            }
            csv.row(cells);
        }
    }

    rep.doc["steps"] = cli.steps;
    rep.doc["points_returned"] = orbit.size();
    rep.doc["diverged"] = diverged;
    rep.doc["conjugated_frame"] = simplified ? "simplified" : "psi";
    rep.doc["first"] = jorbit_point(orbit.front());
    rep.doc["last"] = jorbit_point(orbit.back());
    rep.verdict("completed", !diverged);
    return rep;
}

Report cmd_integrals(const LoadedParams& lp, const Cli& cli) {
    Report rep;
    const FieldParams& p = lp.params;
    const bool complete = (p.a12 == 0);
    const FirstIntegralSet set = complete ? derive_complete(p) : derive_H(p);
    const bool original = (cli.frame == "original");
    const auto vars = original ? kXYZ : kUVW;
    const auto field = original ? build_field(p).comp : conjugated_field_closed_form(p);

    rep.doc["frame"] = original ? "original" : "conjugated";
    rep.doc["complete"] = complete;
    const TriPoly& H = original ? set.H_original : set.H;
    rep.doc["H"] = H.to_string(vars);
    rep.verdict("H_is_first_integral", verify_first_integral(field, H));
    if (complete) {
        const TriPoly& H1 = original ? *set.H1_original : *set.H1;
        const TriPoly& H2 = original ? *set.H2_original : *set.H2;
        rep.doc["H1"] = H1.to_string(vars);
        rep.doc["H2"] = H2.to_string(vars);
        ordered_json wit = ordered_json::array();
        for (const auto& c : *set.independence_witness) wit.push_back(c.to_string(kUVW));
        rep.doc["independence_witness_conjugated"] = wit;
        rep.verdict("H1_is_first_integral", verify_first_integral(field, H1));
        rep.verdict("H2_is_first_integral", verify_first_integral(field, H2));
        rep.verdict("functionally_independent",
                    !((*set.independence_witness)[0].is_zero() &&
                      (*set.independence_witness)[1].is_zero() &&
                      (*set.independence_witness)[2].is_zero()));
    } else {
        rep.doc["note"] = "one polynomial first integral known for deg A1 = 2; "
                          "no second integral is searched for";
    }
    return rep;
}

Report cmd_simulate(const LoadedParams& lp, const Cli& cli) {
    Report rep;
    const auto parts = split_commas(cli.tspan_text);
    if (parts.size() != 2) throw validation_error("--tspan: expected a,b");
    const double ta = std::stod(parts[0]);
    const double tb = std::stod(parts[1]);
    const double tol = cli.tol > 0 ? cli.tol : 1e-10;
    const Vec3 x0 = parse_start_num(cli.start_text);

    const SimulationResult sim = simulate(lp.params, x0, ta, tb, tol);
    const auto monitored = sim.integrals.all(Frame::original);

    if (!cli.out_path.empty()) {
        CsvWriter csv(cli.out_path);
        std::vector<std::string> header{"t", "x", "y", "z"};
        for (const auto& n : sim.integral_names) header.push_back(n);
        csv.row(header);
        for (const auto& [t, y] : sim.trajectory.samples) {
            std::vector<double> vals{t, y[0], y[1], y[2]};
            for (const auto& H : monitored) vals.push_back(H.eval(y));
            csv.row_nums(vals);
        }
    }

    rep.doc["tspan"] = ordered_json{jnum(ta), jnum(tb)};
    rep.doc["samples"] = sim.trajectory.samples.size();
    rep.doc["outcome"] = to_string(sim.trajectory.outcome);
    ordered_json drifts;
    for (std::size_t i = 0; i < sim.integral_names.size(); ++i)
        drifts[sim.integral_names[i]] = jnum(sim.trajectory.drift_per_integral[i]);
    rep.doc["relative_drift"] = drifts;
    rep.doc["final_state"] = jpoint(sim.trajectory.samples.back().second);
    rep.doc["initial_state"] = jpoint(x0);
    rep.verdict("drift_below_1e-7", sim.trajectory.H_drift <= 1e-7);
    return rep;
}

Report cmd_classify(const LoadedParams& lp, const Cli& cli) {
    Report rep;
    const FieldParams& p = lp.params;
    rep.doc["deg_P1"] = p.d1();
    rep.doc["deg_P2"] = p.d2();
    rep.doc["a12_zero"] = (p.a12 == 0);

    if (p.d1() != 1 || p.d2() != 1)
        throw validation_error("classify requires deg P1 = deg P2 = 1");

    if (p.a12 == 0) {
        rep.doc["case"] = "explicit_cubic_flow";
        rep.doc["note"] = "deg A1 <= 1: every nontrivial trajectory is an explicit cubic in t "
                          "and is unbounded in both time directions";
    } else {
        const ReductionRecord rec = reduce(p);
        rep.doc["mu"] = ordered_json{{"exact", to_string(rec.mu_exact)}, {"value", jnum(rec.mu)}};
        rep.doc["case"] = to_string(rec.classification);
        if (rec.beta) {
            rep.doc["beta"] = jnum(*rec.beta);
            rep.doc["time_scale"] = jnum(*rec.time_scale);
            const CStarResult cs = find_cstar(1e-6);
            rep.doc["c_star"] = jnum(cs.c_star);
            rep.doc["z_star"] = jnum(cs.z_star);
            rep.doc["scaled_period"] = jnum(cs.return_time);
            rep.doc["original_frame_period"] = jnum(cs.return_time / *rec.time_scale);
            rep.doc["note"] =
                "the isochronous level is reported both as the energy c* and as the section "
                "height z* = sqrt(2 c*); the scaled-frame period maps back through t = tau / "
                "sqrt(beta)";
        }
    }
    rep.doc["branch_note"] = "branch condition used throughout: deg A1 <= 1 iff a12 = 0";

    if (!cli.start_text.empty()) {
        const Vec3 start = parse_start_num(cli.start_text);
        const TrajectoryClassification cls = classify_trajectory(p, start);
        ordered_json c;
        c["start"] = jpoint(start);
        c["kind"] = to_string(cls.kind);
        if (cls.mu) c["mu"] = jnum(*cls.mu);
        if (cls.energy) c["normal_frame_energy"] = jnum(*cls.energy);
        if (cls.c_scaled) c["scaled_energy_c"] = jnum(*cls.c_scaled);
        if (cls.c_star) c["c_star"] = jnum(*cls.c_star);
        if (cls.one_return_displacement) c["one_return_displacement"] = jnum(*cls.one_return_displacement);
        if (cls.window_outcome) {
            c["window_outcome"] = to_string(*cls.window_outcome);
            c["window"] = jnum(cls.window);
            c["escape_radius"] = jnum(cls.escape_radius);
            c["max_norm_seen"] = jnum(cls.max_norm_seen);
        }
        c["evidence"] = cls.evidence;
        rep.doc["trajectory"] = c;
    }
    return rep;
}

Report cmd_poincare(const Cli& cli) {
    Report rep;
    if (cli.find_cstar_flag == (cli.orbit_c > 0))
        throw validation_error("poincare: choose exactly one of --find-cstar or --orbit <c>");

    if (cli.find_cstar_flag) {
        const double tol_c = cli.tol > 0 ? cli.tol : 1e-6;
        // 50-point displacement profile over the open annulus energy range.
        std::vector<double> grid;
        const double lo = 2.0 / 3.0 + 1e-3, hi = kAnnulusTop - 1e-3;
        for (int i = 0; i < 50; ++i) grid.push_back(lo + (hi - lo) * i / 49.0);
        const ProfileSummary profile = displacement_profile(grid);

        if (!cli.out_path.empty()) {
            CsvWriter csv(cli.out_path);
            csv.row({"c", "L", "tau", "c_drift"});
            for (const auto& r : profile.records)
                csv.row_nums({r.start.c, r.displacement, r.return_time, r.c_drift});
        }

        const CStarResult cs = find_cstar(tol_c);
        const IsochronyReport iso = verify_isochronous_surface(cs.c_star, {-4.0, 0.0, 2.7});

        rep.doc["c_star"] = jnum(cs.c_star);
        rep.doc["z_star"] = jnum(cs.z_star);
        rep.doc["bracket_width"] = jnum(cs.bracket_width);
        rep.doc["displacement_residual"] = jnum(cs.residual_L);
        rep.doc["return_time"] = jnum(cs.return_time);
        double max_cdrift = 0;
        bool transversal = true;
        for (const auto& r : profile.records) {
            max_cdrift = std::max(max_cdrift, r.c_drift);
            transversal = transversal && r.transversal;
        }
        rep.doc["profile"] = ordered_json{{"points", profile.records.size()},
                                          {"sign_changes", profile.sign_changes},
                                          {"monotonicity_violations", profile.monotonicity_violations},
                                          {"max_c_drift", jnum(max_cdrift)}};
        ordered_json iso_j = ordered_json::array();
        for (const auto& s : iso.samples)
            iso_j.push_back(ordered_json{{"x", jnum(s.x)},
                                         {"closure_residual", jnum(s.closure_residual)},
                                         {"period", jnum(s.period)}});
        rep.doc["isochrony"] = ordered_json{{"samples", iso_j},
                                            {"period_spread", jnum(iso.period_spread)},
                                            {"common_period", jnum(iso.common_period)}};
        rep.verdict("z_star_in_expected_bracket", cs.z_star > 1.6305 && cs.z_star < 1.6310);
        rep.verdict("unique_sign_change_on_grid", profile.sign_changes == 1);
        rep.verdict("monotone_above_two_thirds", profile.monotonicity_violations == 0);
        rep.verdict("section_transversal", transversal);
        rep.verdict("isochronous", iso.all_closed && iso.period_spread <= iso.period_tol);
        return rep;
    }

    // --orbit c
    const double c = cli.orbit_c;
    const ReturnRecord rr = return_map(c, cli.x0);
    const Vec3 start{cli.x0, 0.0, std::sqrt(2.0 * c)};
    if (!cli.out_path.empty()) {
        CsvWriter csv(cli.out_path);
        csv.row({"t", "x", "y", "z", "H"});
        const ScaledSystemRhs rhs;
        IntegratorOptions opt;
        opt.tol = 1e-12;
        integrate_direction(rhs, start, rr.return_time, opt, [&](const StepRecord& s) {
            csv.row_nums({s.t1, s.y1[0], s.y1[1], s.y1[2], scaled_energy(s.y1[1], s.y1[2])});
            return StepControl::proceed;
        });
    }
    rep.doc["c"] = jnum(c);
    rep.doc["x0"] = jnum(cli.x0);
    rep.doc["return_time"] = jnum(rr.return_time);
    rep.doc["displacement"] = jnum(rr.displacement);
    rep.doc["c_drift"] = jnum(rr.c_drift);
    rep.verdict("section_transversal", rr.transversal);
    return rep;
}

Report cmd_phase_data(const LoadedParams& lp, const Cli& cli) {
    Report rep;
    const FieldParams& p = lp.params;
    const Rational coef = p.a12 / p.d2p2();
    const TriPoly G = TriPoly::lift(p.P2.antiderivative(), 2) -
                      coef * TriPoly::lift((p.P1 * p.P1).antiderivative(), 1) -
                      p.A3 * TriPoly::variable(1);

    double vmin = -5, vmax = 5, wmin = -5, wmax = 5;
    if (!cli.box_text.empty()) {
        const auto parts = split_commas(cli.box_text);
        if (parts.size() != 4) throw validation_error("--box: expected vmin,vmax,wmin,wmax");
        vmin = std::stod(parts[0]);
        vmax = std::stod(parts[1]);
        wmin = std::stod(parts[2]);
        wmax = std::stod(parts[3]);
    } else {
        const auto cps = planar_critical_points(p);
        if (!cps.empty()) {
            vmin = vmax = cps.front().v;
            wmin = wmax = cps.front().w;
            for (const auto& cp : cps) {
                vmin = std::min(vmin, cp.v);
                vmax = std::max(vmax, cp.v);
                wmin = std::min(wmin, cp.w);
                wmax = std::max(wmax, cp.w);
            }
        }
        vmin -= 3; vmax += 3; wmin -= 3; wmax += 3;
    }

    const int n = cli.grid;
    if (n < 2) throw validation_error("--grid: need at least 2 nodes per axis");
    auto gval = [&](double v, double w) { return G.eval(std::array<double, 3>{0.0, v, w}); };
    const double c = cli.level;

    std::size_t count = 0;
    std::optional<CsvWriter> csv;
    if (!cli.out_path.empty()) {
        csv.emplace(cli.out_path);
        csv->row({"v", "w"});
    }
    // Level-curve samples: linear interpolation along grid edges where G - c
    // changes sign, row-major for determinism.
    const double dv = (vmax - vmin) / (n - 1), dw = (wmax - wmin) / (n - 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = vmin + i * dv, w = wmin + j * dw;
            const double g0 = gval(v, w) - c;
            if (i + 1 < n) {
                const double g1 = gval(v + dv, w) - c;
                if ((g0 <= 0) != (g1 <= 0)) {
                    const double t = g0 / (g0 - g1);
                    ++count;
                    if (csv) csv->row_nums({v + t * dv, w});
                }
            }
            if (j + 1 < n) {
                const double g1 = gval(v, w + dw) - c;
                if ((g0 <= 0) != (g1 <= 0)) {
                    const double t = g0 / (g0 - g1);
                    ++count;
                    if (csv) csv->row_nums({v, w + t * dw});
                }
            }
        }
    }
    rep.doc["level"] = jnum(c);
    rep.doc["grid"] = n;
    rep.doc["box"] = ordered_json{jnum(vmin), jnum(vmax), jnum(wmin), jnum(wmax)};
    rep.doc["samples"] = count;
    rep.doc["hamiltonian"] = G.to_string(kUVW);
    rep.verdict("nonempty", count > 0);
    return rep;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nildyn: discrete and continuous dynamics of a family of "
                 "3-D nilpotent polynomial vector fields"};
    app.require_subcommand(1);

    Cli cli;
    app.add_option("--params", cli.params_path, "parameter file (alternative to the positional)");
    app.add_option("--out", cli.out_path, "CSV output path");
    app.add_option("--tol", cli.tol, "tolerance (command-specific default)");
    app.add_option("--seed", cli.seed, "Newton multi-start seed");
    app.add_option("--starts", cli.starts, "Newton multi-start count");
    app.add_flag("--exact", cli.exact, "force rational arithmetic where supported");
    app.add_flag("--timings", cli.timings, "include runtimes in the report (breaks byte-reproducibility)");
    app.add_option("--inject-fault", cli.inject_fault,
                   "corrupt an intermediate value to exercise the consistency detectors")
        ->check(CLI::IsMember({"nilpotency-mismatch", "two-cycle-ghost"}))
        ->group("");

    std::string positional;
    auto add_params_positional = [&](CLI::App* sub) {
        sub->add_option("params", positional, "parameter file");
    };

    auto* c_nil = app.add_subcommand("nilcheck", "verify nilpotency of the Jacobian exactly");
    add_params_positional(c_nil);
    auto* c_norm = app.add_subcommand("normalize", "emit the conjugating automorphisms and normal forms");
    add_params_positional(c_norm);
    auto* c_fp = app.add_subcommand("fixed-point", "the unique fixed point in every frame");
    add_params_positional(c_fp);
    auto* c_cyc = app.add_subcommand("cycles", "find/certify cycles of the discrete system");
    add_params_positional(c_cyc);
    c_cyc->add_option("--length", cli.length, "cycle length (2 runs the no-2-cycle certificate)")
        ->required();
    auto* c_it = app.add_subcommand("iterate", "iterate the discrete system");
    add_params_positional(c_it);
    c_it->add_option("--start", cli.start_text, "start point x,y,z")->required();
    c_it->add_option("--steps", cli.steps, "number of iterations")->required();
    auto* c_int = app.add_subcommand("integrals", "derive and verify polynomial first integrals");
    add_params_positional(c_int);
    c_int->add_option("--frame", cli.frame, "original|conjugated")
        ->check(CLI::IsMember({"original", "conjugated"}));
    auto* c_sim = app.add_subcommand("simulate", "adaptive integration with conservation monitoring");
    add_params_positional(c_sim);
    c_sim->add_option("--start", cli.start_text, "start point x,y,z")->required();
    c_sim->add_option("--tspan", cli.tspan_text, "time window a,b (must contain 0)");
    auto* c_cls = app.add_subcommand("classify", "mu-classification and per-start trajectory routing");
    add_params_positional(c_cls);
    c_cls->add_option("--start", cli.start_text, "optional start point x,y,z");
    auto* c_poi = app.add_subcommand("poincare", "return map of the scaled mu < 0 system");
    c_poi->add_flag("--find-cstar", cli.find_cstar_flag, "bisect the displacement to the periodic level");
    c_poi->add_option("--orbit", cli.orbit_c, "emit one orbit at energy c");
    c_poi->add_option("--x0", cli.x0, "section x-offset");
    auto* c_ph = app.add_subcommand("phase-data", "level-curve samples of the planar Hamiltonian");
    add_params_positional(c_ph);
    c_ph->add_option("--level", cli.level, "energy level c")->required();
    c_ph->add_option("--grid", cli.grid, "nodes per axis");
    c_ph->add_option("--box", cli.box_text, "vmin,vmax,wmin,wmax");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        std::optional<LoadedParams> lp;
        CLI::App* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name != "poincare") {
            const std::string path = !positional.empty() ? positional : cli.params_path;
            if (path.empty()) throw nildyn::validation_error(name + ": a params file is required");
            lp = nildyn::load_params_file(path);
        }

        Report rep;
        if (name == "nilcheck") rep = cmd_nilcheck(*lp, cli);
        else if (name == "normalize") rep = cmd_normalize(*lp, cli);
        else if (name == "fixed-point") rep = cmd_fixed_point(*lp, cli);
        else if (name == "cycles") rep = cmd_cycles(*lp, cli);
        else if (name == "iterate") rep = cmd_iterate(*lp, cli);
        else if (name == "integrals") rep = cmd_integrals(*lp, cli);
        else if (name == "simulate") rep = cmd_simulate(*lp, cli);
        else if (name == "classify") rep = cmd_classify(*lp, cli);
        else if (name == "poincare") rep = cmd_poincare(cli);
        else if (name == "phase-data") rep = cmd_phase_data(*lp, cli);
        else throw nildyn::validation_error("unknown subcommand: " + name);

        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        emit_report(name, lp, rep, cli, ms);
        return 0;
    } catch (const nildyn::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nildyn::consistency_error& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
