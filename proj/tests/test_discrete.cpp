#include <catch2/catch_amalgamated.hpp>

#include "nildyn/discrete.hpp"
#include "support.hpp"

using namespace nildyn;

namespace {

FieldParams canonical_quadratic() {
    FieldParams p;
    p.P1 = UniPoly::variable();
    p.P2 = UniPoly::variable();
    p.a12 = Rational(1);
    return p;
}

// P1 = (9s - 4s^2)/5 with nu = 0: h(1) = 0 and L22 = 4/25.
FieldParams attractor_params() {
    FieldParams p;
    p.P1 = UniPoly(std::vector<Rational>{Rational(0), Rational(9, 5), Rational(-4, 5)});
    p.P2 = UniPoly::variable();
    p.a12 = Rational(1);
    return p;
}

} // namespace

TEST_CASE("iterate: constant orbit at the fixed point, exact reproducibility") {
    const FieldParams p = canonical_quadratic();
    const PolyMap3 F = build_field(p);
    const FixedPointResult fp = fixed_point(p);
    const auto orbit = iterate(F, OrbitPoint::from_exact(fp.original), 5);
    REQUIRE(orbit.size() == 6);
    for (const auto& op : orbit) CHECK(*op.exact == fp.original);
}

TEST_CASE("iterate: the simplified-map 3-cycle example") {
    const PolyMap3 K = simplified_map_closed_form(canonical_quadratic());
    const auto orbit =
        iterate(K, OrbitPoint::from_exact(ExactPoint{Rational(0), Rational(1), Rational(0)}), 3);
    CHECK(*orbit[1].exact == ExactPoint{Rational(1), Rational(0), Rational(1)});
    CHECK(*orbit[2].exact == ExactPoint{Rational(-1), Rational(1), Rational(1)});
    CHECK(*orbit[3].exact == ExactPoint{Rational(0), Rational(1), Rational(0)});
}

TEST_CASE("iterate: numeric divergence is flagged with a partial orbit") {
    // quadratic A1 squares the third coordinate every step: doubles overflow
    const PolyMap3 F = build_field(canonical_quadratic());
    bool diverged = false;
    const auto orbit = iterate(F, OrbitPoint::from_num({50.0, 50.0, 50.0}), 30, &diverged);
    CHECK(diverged);
    CHECK(orbit.size() < 31);
}

TEST_CASE("third iterate collapses to the fixed point when a12 = 0") {
    std::mt19937_64 rng(111);
    for (int i = 0; i < 5; ++i) {
        const FieldParams p = nd_test::random_params(rng, nd_test::Branch::deg_p2_big, 3);
        const PolyMap3 F = build_field(p);
        const FixedPointResult fp = fixed_point(p);
        for (int s = 0; s < 8; ++s) {
            const auto orbit = iterate(F, OrbitPoint::from_exact(nd_test::random_point(rng)), 3);
            CHECK(*orbit[3].exact == fp.original);
        }
    }
}

TEST_CASE("fixed point: examples in every frame") {
    FieldParams trivial;
    trivial.P1 = UniPoly::variable();
    trivial.P2 = UniPoly::variable();
    const FixedPointResult fp0 = fixed_point(trivial);
    const ExactPoint zero{Rational(0), Rational(0), Rational(0)};
    CHECK(fp0.original == zero);
    CHECK(fp0.psi_frame == zero);
    CHECK(*fp0.simplified_frame == zero);

    FieldParams q = canonical_quadratic();
    q.A3 = Rational(2);
    q.a20 = Rational(1);
    const FixedPointResult fp = fixed_point(q);
    CHECK(*fp.simplified_frame == ExactPoint{Rational(0), Rational(3), Rational(3)});
}

TEST_CASE("conjugacy commutation at random rational points") {
    std::mt19937_64 rng(222);
    for (int i = 0; i < 10; ++i) {
        const FieldParams p = nd_test::random_params(rng, nd_test::Branch::either, 3);
        const PolyMap3 F = build_field(p);
        const PolyMap3 psi = psi_automorphism(p);
        const PolyMap3 G = conjugated_map_closed_form(p);
        const ExactPoint pt = nd_test::random_point(rng);
        CHECK(psi.inverse().eval(F.eval(psi.eval(pt))) == G.eval(pt));
    }
}

TEST_CASE("no 2-cycles: symbolic certificate and numeric clusters, both branches") {
    std::mt19937_64 rng(333);
    for (auto branch : {nd_test::Branch::deg_p2_one, nd_test::Branch::deg_p2_big}) {
        const FieldParams p = nd_test::random_params(rng, branch, 3);
        NewtonOptions opt;
        opt.starts = 60;
        const TwoCycleCertificate cert = certify_no_2cycles(p, opt);
        CHECK(cert.symbolic_ok);
        CHECK(cert.numeric_ok);
        REQUIRE_FALSE(cert.identities.empty());
        for (const auto& c : cert.identities) CHECK(c.pass);
        for (const auto& c : cert.clusters)
            CHECK(num_dist(c.representative, cert.fixed_point_num) <= cert.cluster_radius);
    }
}

TEST_CASE("ghost cluster trips the contradiction detector") {
    TwoCycleCertificate cert;
    cert.fixed_point_num = {0, 0, 0};
    cert.clusters.push_back(Cluster{{5, 5, 5}, 1});
    CHECK_THROWS_AS(validate_two_cycle_clusters(cert), consistency_error);
}

TEST_CASE("find_3cycle: the canonical exact witness") {
    const auto cycles = find_3cycle(canonical_quadratic());
    REQUIRE(cycles.size() == 1);
    const CycleReport& c = cycles.front();
    CHECK(c.exact);
    CHECK(*c.s0_exact == Rational(1));
    CHECK(*c.points_simplified[0].exact == ExactPoint{Rational(0), Rational(1), Rational(0)});
    CHECK(*c.points_simplified[1].exact == ExactPoint{Rational(1), Rational(0), Rational(1)});
    CHECK(*c.points_simplified[2].exact == ExactPoint{Rational(-1), Rational(1), Rational(1)});
    CHECK(*c.L22.exact == Rational(4));
    CHECK(c.classification == CycleClass::saddle);
}

TEST_CASE("find_3cycle: h identities and preconditions") {
    std::mt19937_64 rng(444);
    for (int i = 0; i < 10; ++i) {
        FieldParams p = nd_test::random_params(rng, nd_test::Branch::deg_p2_one, 3);
        if (p.a12 == 0) p.a12 = Rational(1, 2);
        const Rational nu = p.nu();
        const UniPoly shift = p.P1 - UniPoly(p.P1.eval(nu));
        const UniPoly h = p.a12 * (shift * shift) + UniPoly(nu) - UniPoly::variable();
        CHECK(h.eval(nu) == 0);
        CHECK(h.derivative().eval(nu) == -1);
        // every returned root closes the cycle and solves h
        for (const auto& c : find_3cycle(p)) {
            if (c.exact) {
                CHECK(h.eval(*c.s0_exact) == 0);
            } else {
                CHECK(std::fabs(h.eval_double(c.s0)) < 1e-6);
            }
        }
    }
    FieldParams no12 = nd_test::random_params(rng, nd_test::Branch::deg_p2_one);
    no12.a12 = Rational(0);
    CHECK_THROWS_AS(find_3cycle(no12), validation_error);
}

TEST_CASE("classify_cycle: product structure and the attractor instance") {
    const FieldParams p = canonical_quadratic();
    const auto reports = find_3cycle(p);
    const CycleReport c = classify_cycle(p, reports.front());
    CHECK(c.product_structure_ok);
    CHECK(*c.L22_product->exact == Rational(4));
    CHECK(c.classification == CycleClass::saddle);

    const FieldParams ap = attractor_params();
    bool found_attractor = false;
    for (const auto& rep : find_3cycle(ap)) {
        const CycleReport cc = classify_cycle(ap, rep);
        if (cc.exact && cc.s0_exact && *cc.s0_exact == Rational(1)) {
            CHECK(*cc.L22.exact == Rational(4, 25));
            CHECK(cc.classification == CycleClass::attractor);
            found_attractor = true;
        } else {
            CHECK(cc.classification == CycleClass::saddle);
        }
    }
    CHECK(found_attractor);
}

TEST_CASE("linear P1 always yields L22 = 4 (not an attractor)") {
    std::mt19937_64 rng(555);
    for (int i = 0; i < 8; ++i) {
        FieldParams p;
        p.P1 = nd_test::random_unipoly(rng, 1);
        p.P2 = UniPoly::variable();
        p.a12 = nd_test::random_rational(rng, true);
        p.A3 = nd_test::random_rational(rng);
        p.a10 = nd_test::random_rational(rng);
        const auto cycles = find_3cycle(p);
        REQUIRE(cycles.size() == 1);
        if (cycles.front().exact) {
            CHECK(*cycles.front().L22.exact == Rational(4));
        } else {
            CHECK_THAT(cycles.front().L22.value, Catch::Matchers::WithinAbs(4.0, 1e-9));
        }
        CHECK(cycles.front().classification == CycleClass::saddle);
    }
}

TEST_CASE("every cycle report closes under the simplified map") {
    const FieldParams p = attractor_params();
    const PolyMap3 K = simplified_map_closed_form(p);
    for (const auto& rep : find_3cycle(p)) {
        if (rep.exact) {
            ExactPoint q = *rep.points_simplified[0].exact;
            for (int i = 0; i < rep.length; ++i) q = K.eval(q);
            CHECK(q == *rep.points_simplified[0].exact);
        } else {
            NumPoint q = rep.points_simplified[0].num;
            for (int i = 0; i < rep.length; ++i) q = K.eval(q);
            CHECK(num_dist(q, rep.points_simplified[0].num) < 1e-9);
        }
    }
}

TEST_CASE("numeric cycle search: rediscovery, emptiness, and the 5-cycle") {
    const FieldParams p = canonical_quadratic();
    NewtonOptions opt;
    opt.starts = 150;

    CHECK(find_cycles_numeric(p, 2, opt).empty());

    const auto three = find_cycles_numeric(p, 3, opt);
    REQUIRE(three.size() == 1);
    bool matches_exact = false;
    for (const auto& op : three.front().points_simplified)
        if (num_dist(op.num, {0.0, 1.0, 0.0}) < 1e-8) matches_exact = true;
    CHECK(matches_exact);

    const auto five = find_cycles_numeric(p, 5, opt);
    REQUIRE_FALSE(five.empty());
    const NumericMap3 K = numeric_simplified_map(p);
    for (const auto& c : five) {
        CHECK(num_dist(K.power(c.points_simplified[0].num, 5), c.points_simplified[0].num) <
              1e-10 * (1 + num_norm(c.points_simplified[0].num)));
        // no point of a genuine 5-cycle is the fixed point
        for (const auto& op : c.points_simplified) CHECK(num_norm(op.num) > 1e-6);
    }

    CHECK_THROWS_AS(find_cycles_numeric(p, 9, opt), validation_error);
    FieldParams big;
    big.P1 = UniPoly::variable();
    big.P2 = UniPoly::from_ints({0, 0, 1});
    CHECK_THROWS_AS(find_cycles_numeric(big, 3, opt), validation_error);
}

TEST_CASE("numeric search results are deterministic for a fixed seed") {
    const FieldParams p = canonical_quadratic();
    NewtonOptions opt;
    opt.starts = 80;
    const auto a = find_cycles_numeric(p, 5, opt);
    const auto b = find_cycles_numeric(p, 5, opt);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (int k = 0; k < 3; ++k)
            CHECK(a[i].points_simplified[0].num[static_cast<std::size_t>(k)] ==
                  b[i].points_simplified[0].num[static_cast<std::size_t>(k)]);
}
