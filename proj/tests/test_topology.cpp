#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "tmono/topology.hpp"

using namespace tmono;

namespace {

double phasor_residual(double a0, double a1, double a2, double t1, double t2) {
    return std::abs(a0 + a1 * std::exp(Complex(0, t1)) + a2 * std::exp(Complex(0, t2)));
}

}  // namespace

TEST_CASE("solve_phasor_zero") {
    SECTION("equal amplitudes give the symmetric pair") {
        const auto sols = solve_phasor_zero(1, 1, 1);
        REQUIRE(sols.size() == 2);
        CHECK(sols[0][0] == Catch::Approx(2 * M_PI / 3));
        CHECK(sols[0][1] == Catch::Approx(-2 * M_PI / 3));
        CHECK(sols[1][0] == Catch::Approx(-2 * M_PI / 3));
        CHECK(sols[1][1] == Catch::Approx(2 * M_PI / 3));
    }
    SECTION("generic topological amplitudes satisfy the zero condition") {
        const auto sols = solve_phasor_zero(1, 1.3, 0.5);
        REQUIRE(sols.size() == 2);
        for (const auto& s : sols) CHECK(phasor_residual(1, 1.3, 0.5, s[0], s[1]) < 1e-12);
    }
    SECTION("gapped amplitudes yield no solution") {
        CHECK(solve_phasor_zero(1, 1.6, 0.5).empty());
    }
    SECTION("boundary amplitudes yield the single collinear solution") {
        const auto sols = solve_phasor_zero(1, 2, 1);
        REQUIRE(sols.size() == 1);
        CHECK(phasor_residual(1, 2, 1, sols[0][0], sols[0][1]) < 1e-12);
    }
    SECTION("non-positive amplitudes are rejected") {
        CHECK_THROWS_AS(solve_phasor_zero(0, 1, 1), Error);
    }
}

TEST_CASE("classify_region") {
    SECTION("paper parameter sets") {
        CircuitParams p;
        p.ej_l = {1, 1.3, 0.5};
        const auto [l1, r1] = classify_region(Model{p});
        CHECK(l1.tag == RegionTag::Topological);
        CHECK(l1.margin == Catch::Approx(0.2));
        CHECK(r1.tag == RegionTag::Topological);

        p.ej_l = {1, 1.6, 0.5};
        CHECK(classify_region(Model{p}).first.tag == RegionTag::Gapped);
    }
    SECTION("critical boundary") {
        TripleDotParams t;
        t.v_l = 2.0;  // = Gamma_x + Gamma_y
        const auto [l, r] = classify_region(Model{t});
        CHECK(l.tag == RegionTag::Critical);
        CHECK(std::abs(l.margin) <= 1e-12);
        CHECK(r.tag == RegionTag::Topological);
    }
    SECTION("canonical model has no coupling triples") {
        CHECK_THROWS_AS(classify_region(Model{CanonicalParams{}}), NotChiralRegime);
    }
}

TEST_CASE("locate_monopoles") {
    SECTION("circuit with equal junction energies") {
        const Model m{CircuitParams{}};
        const auto pts = locate_monopoles(m);
        REQUIRE(pts.size() == 4);
        const double c = 2 * M_PI / 3;
        for (const auto& d : pts) {
            CHECK(d.point.x == Catch::Approx(d.s1 * c));
            CHECK(d.point.y == Catch::Approx(-d.s1 * 2 * c));
            CHECK(d.point.z == Catch::Approx(d.s2 * c));
            CHECK(d.point.w == Catch::Approx(-d.s2 * 2 * c));
            CHECK(d.residual < 1e-9 * m.coupling_scale());
            // spectrum consistency: triple degeneracy at the located point
            const EigenSystem3 es = eigh3(m.hamiltonian(d.point));
            CHECK(es.values[2] - es.values[0] < 1e-8 * m.coupling_scale());
        }
        // all four label combinations appear exactly once
        std::array<int, 4> seen{};
        for (const auto& d : pts) seen[(d.s1 + 1) + (d.s2 + 1) / 2]++;
        for (int n : seen) CHECK(n == 1);
    }
    SECTION("gap is strictly positive away from the monopoles") {
        const Model m{CircuitParams{}};
        const auto pts = locate_monopoles(m);
        for (int i = 0; i < 200; ++i) {
            const PhasePoint p{-M_PI + 2 * M_PI * counter_uniform(5, i, 0),
                               -M_PI + 2 * M_PI * counter_uniform(5, i, 1),
                               -M_PI + 2 * M_PI * counter_uniform(5, i, 2),
                               -M_PI + 2 * M_PI * counter_uniform(5, i, 3)};
            double dist = 1e9;
            for (const auto& d : pts) {
                const double dd = std::hypot(std::hypot(p.x - d.point.x, p.y - d.point.y),
                                             std::hypot(p.z - d.point.z, p.w - d.point.w));
                dist = std::min(dist, dd);
            }
            if (dist < 0.1) continue;
            const EigenSystem3 es = eigh3(m.hamiltonian(p));
            CHECK(es.values[1] - es.values[0] > 0.0);
        }
    }
    SECTION("triple dot positions follow arccos(v / 2 Gamma)") {
        for (double v : {0.5, 1.0}) {
            TripleDotParams t;
            t.v_l = t.v_r = v;
            const auto pts = locate_monopoles(Model{t});
            REQUIRE(pts.size() == 4);
            const double c = std::acos(v / 2.0);
            for (const auto& d : pts) {
                CHECK(d.point.x == Catch::Approx(d.s1 * c));
                CHECK(d.point.y == Catch::Approx(-d.s1 * c));
                CHECK(d.point.z == Catch::Approx(d.s2 * c));
                CHECK(d.point.w == Catch::Approx(-d.s2 * c));
                CHECK(d.residual < 1e-9);
            }
        }
    }
    SECTION("gapped triple dot yields nothing") {
        TripleDotParams t;
        t.v_l = t.v_r = 2.5;
        CHECK(locate_monopoles(Model{t}).empty());
        CHECK(classify_region(Model{t}).first.tag == RegionTag::Gapped);
    }
    SECTION("regime guards") {
        CHECK_THROWS_AS(locate_monopoles(Model{CanonicalParams{}}), NotChiralRegime);
        CircuitParams p;
        p.ng_l = 0.3;
        CHECK_THROWS_AS(locate_monopoles(Model{p}), NotChiralRegime);
    }
}

TEST_CASE("cube quadrature charge") {
    SECTION("canonical monopole is quantized to +1") {
        const auto r = dd_charge_cube(Model{CanonicalParams{}}, PhasePoint{0, 0, 0, 0}, 0.5, 8);
        CHECK(r.q_rounded == 1);
        CHECK(std::abs(r.q_value - 1.0) < 0.02);
        CHECK(r.method == ChargeMethod::CubeQuadrature);
        CHECK(r.evaluations == 2 * 4 * (8 * 8 * 8 + 16 * 16 * 16));
    }
    SECTION("circuit charges are -s1 s2 and sum to zero") {
        const Model m{CircuitParams{}};
        double sum = 0;
        for (const auto& d : locate_monopoles(m)) {
            const auto r = dd_charge_cube(m, d.point, 0.3, 6);
            CHECK(std::abs(r.q_value - (-d.s1 * d.s2)) < 0.02);
            sum += r.q_value;
        }
        CHECK(std::abs(sum) < 0.04);
    }
    SECTION("triple-dot charges are +s1 s2") {
        TripleDotParams t;
        Model m{t};
        const auto pts = locate_monopoles(m);
        const auto r = dd_charge_cube(m, pts[0].point, 0.3, 6);
        CHECK(std::abs(r.q_value - pts[0].s1 * pts[0].s2) < 0.02);
    }
    SECTION("contractible surface in a gapped region encloses nothing") {
        CircuitParams p;
        p.ej_l = {1, 1.6, 0.5};
        const auto r = dd_charge_cube(Model{p}, PhasePoint{0.3, 0.4, 2.0, -4.0}, 0.3, 6);
        CHECK(r.q_rounded == 0);
        CHECK(std::abs(r.q_value) < 1e-6);
    }
    SECTION("parallel evaluation reproduces the serial result bit for bit") {
        ChargeOptions serial, parallel;
        parallel.jobs = 3;
        const Model m{CanonicalParams{}};
        const auto a = dd_charge_cube(m, PhasePoint{0, 0, 0, 0}, 0.5, 4,
                                      ChargeMethod::CubeQuadrature, 0, serial);
        const auto b = dd_charge_cube(m, PhasePoint{0, 0, 0, 0}, 0.5, 4,
                                      ChargeMethod::CubeQuadrature, 0, parallel);
        CHECK(a.q_value == b.q_value);
    }
    SECTION("input guards") {
        const Model m{CanonicalParams{}};
        CHECK_THROWS_AS(dd_charge_cube(m, PhasePoint{0, 0, 0, 0}, -0.1, 8), Error);
        CHECK_THROWS_AS(dd_charge_cube(m, PhasePoint{0, 0, 0, 0}, 0.5, 2), Error);
    }
    SECTION("degeneracy on the surface is reported") {
        // cube face through the monopole, aligned so a midpoint node hits it
        const Model m{CanonicalParams{}};
        CHECK_THROWS_AS(dd_charge_cube(m, PhasePoint{0.5, 0.125, 0.125, 0.125}, 0.5, 4),
                        DegeneracyOnSurface);
    }
}

TEST_CASE("Monte-Carlo charges") {
    const Model m{CanonicalParams{}};
    SECTION("cube sampling reproduces the charge and is seed deterministic") {
        const auto a = dd_charge_cube(m, PhasePoint{0, 0, 0, 0}, 0.5, 4000,
                                      ChargeMethod::CubeMonteCarlo, 11);
        const auto b = dd_charge_cube(m, PhasePoint{0, 0, 0, 0}, 0.5, 4000,
                                      ChargeMethod::CubeMonteCarlo, 11);
        CHECK(a.q_value == b.q_value);
        CHECK(std::abs(a.q_value - 1.0) < 3 * a.error_estimate);
        const auto c = dd_charge_cube(m, PhasePoint{0, 0, 0, 0}, 0.5, 4000,
                                      ChargeMethod::CubeMonteCarlo, 12);
        CHECK(a.q_value != c.q_value);
    }
    SECTION("standard error scales as 1/sqrt(N)") {
        const auto a = dd_charge_cube(m, PhasePoint{0, 0, 0, 0}, 0.5, 1500,
                                      ChargeMethod::CubeMonteCarlo, 3);
        const auto b = dd_charge_cube(m, PhasePoint{0, 0, 0, 0}, 0.5, 15000,
                                      ChargeMethod::CubeMonteCarlo, 3);
        const double ratio = a.error_estimate / b.error_estimate;
        CHECK(ratio > std::sqrt(10.0) / 1.5);
        CHECK(ratio < std::sqrt(10.0) * 1.5);
    }
    SECTION("sphere surface integral") {
        const auto r = dd_charge_sphere(m, PhasePoint{0, 0, 0, 0}, 1.0, 5000, 7);
        CHECK(r.q_rounded == 1);
        CHECK(std::abs(r.q_value - 1.0) < 0.01);
        CHECK(r.method == ChargeMethod::SphereMonteCarlo);
        CHECK(r.surface_parameter == 1.0);
    }
    SECTION("parallel sampling is deterministic") {
        ChargeOptions parallel;
        parallel.jobs = 3;
        const auto a = dd_charge_sphere(m, PhasePoint{0, 0, 0, 0}, 1.0, 2000, 7);
        const auto b = dd_charge_sphere(m, PhasePoint{0, 0, 0, 0}, 1.0, 2000, 7, parallel);
        CHECK(a.q_value == b.q_value);
    }
}

TEST_CASE("surface independence") {
    const Model m{CircuitParams{}};
    const auto pts = locate_monopoles(m);
    const auto& d = pts[0];
    const auto c1 = dd_charge_cube(m, d.point, 0.3, 6);
    const auto c2 = dd_charge_cube(m, d.point, 0.15, 6);
    const auto sp = dd_charge_sphere(m, d.point, 0.2, 8000, 1);
    CHECK(std::abs(c1.q_value - c2.q_value) < c1.error_estimate + c2.error_estimate);
    CHECK(std::abs(c1.q_value - sp.q_value) < c1.error_estimate + sp.error_estimate);
}
