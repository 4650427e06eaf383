#include <catch2/catch_amalgamated.hpp>

#include "nildyn/continuous.hpp"
#include "support.hpp"

using namespace nildyn;

namespace {

FieldParams trivial_params() {
    FieldParams p;
    p.P1 = UniPoly::variable();
    p.P2 = UniPoly::variable();
    return p;
}

const TriPoly kScaledH = TriPoly::monomial(Rational(1), 0, 2, 0) +
                         TriPoly::monomial(Rational(1, 2), 0, 0, 2) +
                         TriPoly::monomial(Rational(-1, 3), 0, 3, 0);

struct ScaledRhs {
    Vec3 operator()(const Vec3& s) const { return {s[1] - 1.0, s[2], s[1] * (s[1] - 2.0)}; }
};

} // namespace

TEST_CASE("derive_H: trivial case and the general shape") {
    const FirstIntegralSet set = derive_H(trivial_params());
    CHECK(set.H == TriPoly::monomial(Rational(1, 2), 0, 0, 2)); // w^2/2

    std::mt19937_64 rng(121);
    for (int i = 0; i < 30; ++i) {
        const FieldParams p = nd_test::random_params(rng, nd_test::Branch::either, 3);
        const FirstIntegralSet s = derive_H(p); // throws if any identity fails
        CHECK(verify_first_integral(conjugated_field_closed_form(p), s.H));
        CHECK(verify_first_integral(build_field(p).comp, s.H_original));
    }
}

TEST_CASE("scaled-frame Hamiltonian is a first integral of the scaled system") {
    // (6y^2 + 3z^2 - 2y^3)/6 for x' = y-1, y' = z, z' = y(y-2)
    const std::array<TriPoly, 3> field{
        TriPoly::variable(1) - TriPoly::constant(Rational(1)), TriPoly::variable(2),
        TriPoly::variable(1) * (TriPoly::variable(1) - TriPoly::constant(Rational(2)))};
    CHECK(verify_first_integral(field, kScaledH));
}

TEST_CASE("verify_first_integral rejects constants and non-integrals") {
    const std::array<TriPoly, 3> field{TriPoly::variable(1), TriPoly::variable(2), TriPoly()};
    CHECK_FALSE(verify_first_integral(field, TriPoly::constant(Rational(7))));
    CHECK_FALSE(verify_first_integral(field, TriPoly::variable(0))); // Lie derivative = y
}

TEST_CASE("derive_complete: the xi recursion spot value") {
    FieldParams p = trivial_params();
    p.A3 = Rational(1);
    const FirstIntegralSet set = derive_complete(p);
    // H2 = u - v w + w^3/3
    const TriPoly expect = TriPoly::variable(0) - TriPoly::variable(1) * TriPoly::variable(2) +
                           TriPoly::monomial(Rational(1, 3), 0, 0, 3);
    CHECK(*set.H2 == expect);
    CHECK(lie_derivative(conjugated_field_closed_form(p), *set.H2).is_zero());
}

TEST_CASE("derive_complete: A3 = 0 branch and independence witnesses") {
    const FirstIntegralSet set = derive_complete(trivial_params());
    CHECK(*set.H1 == TriPoly::variable(2)); // w
    CHECK(*set.H2 == TriPoly::monomial(Rational(1, 2), 0, 2, 0) -
                         TriPoly::variable(0) * TriPoly::variable(2)); // v^2/2 - u w
    REQUIRE(set.independence_witness);
    CHECK_FALSE(((*set.independence_witness)[0].is_zero() &&
                 (*set.independence_witness)[1].is_zero() &&
                 (*set.independence_witness)[2].is_zero()));

    FieldParams bad = trivial_params();
    bad.a12 = Rational(1);
    CHECK_THROWS_AS(derive_complete(bad), validation_error);
}

TEST_CASE("derive_complete holds across random draws of both A3 branches") {
    std::mt19937_64 rng(232);
    int a3_zero = 0, a3_nonzero = 0;
    while (a3_zero < 15 || a3_nonzero < 15) {
        FieldParams p = nd_test::random_params(rng, nd_test::Branch::either, 4);
        p.a12 = Rational(0);
        if (a3_zero < 15 && a3_nonzero >= 15) p.A3 = Rational(0);
        if (p.A3 == 0) {
            ++a3_zero;
        } else {
            ++a3_nonzero;
        }
        const FirstIntegralSet set = derive_complete(p);
        CHECK(verify_first_integral(conjugated_field_closed_form(p), *set.H1));
        CHECK(verify_first_integral(conjugated_field_closed_form(p), *set.H2));
        CHECK(verify_first_integral(build_field(p).comp, *set.H2_original));
    }
}

TEST_CASE("frame coherence: transported H agrees pointwise, exactly") {
    std::mt19937_64 rng(343);
    for (int i = 0; i < 10; ++i) {
        const FieldParams p = nd_test::random_params(rng, nd_test::Branch::either, 3);
        const FirstIntegralSet set = derive_H(p);
        const PolyMap3 psi = psi_automorphism(p);
        const std::array<Rational, 3> pt = nd_test::random_point(rng); // original coordinates
        CHECK(set.H_original.eval(pt) == set.H.eval(psi.inverse().eval(pt)));
    }
}

TEST_CASE("integrate: constant trajectory at a singular point") {
    // trivial field (y, z, 0) has singular set {y = z = 0}
    const CompiledField rhs(build_field(trivial_params()).comp);
    IntegratorOptions opt;
    const Trajectory traj = integrate_window(rhs, {3.0, 0.0, 0.0}, -5.0, 5.0, opt);
    CHECK(traj.outcome == Outcome::bounded_window);
    for (const auto& [t, y] : traj.samples) CHECK(vec_norm({y[0] - 3.0, y[1], y[2]}) < 1e-12);
}

TEST_CASE("integrate: conservation on the scaled system from the periodic start") {
    IntegratorOptions opt;
    opt.tol = 1e-10;
    const Trajectory traj = integrate_window(ScaledRhs{}, {0.0, 0.0, 1.6308}, 0.0, 50.0, opt, {kScaledH});
    CHECK(traj.outcome == Outcome::bounded_window);
    CHECK(traj.H_drift <= 1e-8);
}

TEST_CASE("integrate: drift of the off-level neighbor advances +x within the window") {
    IntegratorOptions opt;
    opt.tol = 1e-10;
    const Trajectory traj = integrate_window(ScaledRhs{}, {0.0, 0.0, 1.6323}, 0.0, 200.0, opt, {kScaledH});
    // x increases monotonically over successive windows (the orbit drifts
    // along the invariant cylinder; boundedness in the window is expected)
    double x50 = 0, x100 = 0, x200 = 0;
    for (const auto& [t, y] : traj.samples) {
        if (t <= 50.0) x50 = y[0];
        if (t <= 100.0) x100 = y[0];
        x200 = y[0];
    }
    CHECK(x50 > 1.0);
    CHECK(x100 > x50);
    CHECK(x200 > x100);
    CHECK(traj.H_drift <= 1e-7);
}

TEST_CASE("integrate: genuinely unbounded starts exceed the escape radius") {
    // outside the period annulus the scaled system blows up quickly
    IntegratorOptions opt;
    opt.tol = 1e-10;
    const Trajectory traj = integrate_window(ScaledRhs{}, {0.0, 4.0, 1.0}, -200.0, 200.0, opt);
    CHECK((traj.outcome == Outcome::escaped_forward || traj.outcome == Outcome::escaped_both));
}

TEST_CASE("explicit cubic flow: closed-form anchors") {
    FieldParams p = trivial_params(); // A3 = 0
    const Vec3 r0 = explicit_flow_linear_case(p, {0.0, 1.0, 0.0}, 3.5);
    CHECK_THAT(r0[0], Catch::Matchers::WithinAbs(3.5, 1e-14));
    CHECK_THAT(r0[1], Catch::Matchers::WithinAbs(1.0, 1e-14));
    CHECK_THAT(r0[2], Catch::Matchers::WithinAbs(0.0, 1e-14));

    p.A3 = Rational(1);
    const double t = 2.0;
    const Vec3 r1 = explicit_flow_linear_case(p, {0.0, 0.0, 0.0}, t);
    CHECK_THAT(r1[0], Catch::Matchers::WithinAbs(t * t * t / 6, 1e-13));
    CHECK_THAT(r1[1], Catch::Matchers::WithinAbs(t * t / 2, 1e-13));
    CHECK_THAT(r1[2], Catch::Matchers::WithinAbs(t, 1e-13));

    FieldParams bad = trivial_params();
    bad.a12 = Rational(1);
    CHECK_THROWS_AS(explicit_flow_linear_case(bad, {0, 0, 0}, 1.0), validation_error);
}

TEST_CASE("explicit cubic flow matches the adaptive integrator") {
    std::mt19937_64 rng(454);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    std::uniform_real_distribution<double> ut(0.1, 5.0);
    for (int i = 0; i < 20; ++i) {
        FieldParams p;
        p.P1 = nd_test::random_unipoly(rng, 1);
        p.P2 = nd_test::random_unipoly(rng, 1);
        p.a10 = nd_test::random_rational(rng);
        p.a11 = nd_test::random_rational(rng);
        p.a20 = nd_test::random_rational(rng);
        p.a21 = nd_test::random_rational(rng);
        p.A3 = nd_test::random_rational(rng);
        const Vec3 x0{uni(rng), uni(rng), uni(rng)};
        const double t = ut(rng);

        const Vec3 closed = explicit_flow_linear_case(p, x0, t);
        const CompiledField rhs(build_field(p).comp);
        IntegratorOptions opt;
        opt.tol = 1e-10;
        Vec3 numeric{};
        integrate_direction(rhs, x0, t, opt, [](const StepRecord&) { return StepControl::proceed; });
        const auto res = integrate_direction(rhs, x0, t, opt,
                                             [](const StepRecord&) { return StepControl::proceed; });
        numeric = res.y;
        for (int k = 0; k < 3; ++k)
            CHECK_THAT(numeric[static_cast<std::size_t>(k)],
                       Catch::Matchers::WithinAbs(closed[static_cast<std::size_t>(k)], 1e-8));
    }
}

namespace {

/// Value together with the sum of absolute term contributions; the latter is
/// the right yardstick for "relative" when the polynomial cancels massively.
std::pair<double, double> eval_with_magnitude(const TriPoly& p, const Vec3& at) {
    double value = 0, magnitude = 0;
    for (const auto& [m, c] : p.terms()) {
        const double term = to_double(c) * std::pow(at[0], m.i) * std::pow(at[1], m.j) *
                            std::pow(at[2], m.k);
        value += term;
        magnitude += std::fabs(term);
    }
    return {value, magnitude};
}

} // namespace

TEST_CASE("H2 agrees at the two ends of integrated segments (complete branch)") {
    std::mt19937_64 rng(565);
    int done = 0;
    while (done < 6) {
        FieldParams p = nd_test::random_params(rng, nd_test::Branch::either, 3);
        p.a12 = Rational(0);
        if (p.A3 == 0) p.A3 = Rational(1, 2);
        if (p.d1() > 3) continue;
        const FirstIntegralSet set = derive_complete(p);
        const CompiledField rhs(build_field(p).comp);
        IntegratorOptions opt;
        opt.tol = 1e-12;
        const Trajectory traj = integrate_window(rhs, {0.3, -0.2, 0.4}, -2.0, 2.0, opt);
        const auto [v0, m0] = eval_with_magnitude(*set.H2_original, traj.samples.front().second);
        const auto [v1, m1] = eval_with_magnitude(*set.H2_original, traj.samples.back().second);
        const double scale = std::max({m0, m1, 1.0});
        CHECK(std::fabs(v1 - v0) <= 1e-6 * scale);
        ++done;
    }
}

TEST_CASE("simulate: escape outcomes and step records") {
    FieldParams p = trivial_params();
    p.A3 = Rational(1);
    const SimulationResult sim = simulate(p, {0, 0, 0}, -300.0, 300.0, 1e-10);
    CHECK(sim.trajectory.outcome == Outcome::escaped_both);
    // samples strictly increasing in t
    for (std::size_t i = 1; i < sim.trajectory.samples.size(); ++i)
        CHECK(sim.trajectory.samples[i].first > sim.trajectory.samples[i - 1].first);
}
