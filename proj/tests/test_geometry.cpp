#include <catch2/catch_amalgamated.hpp>

#include "tmono/geometry.hpp"
#include "tmono/rng.hpp"

using namespace tmono;

namespace {

PhasePoint random_q_point(std::uint64_t i, double lo, double hi) {
    std::array<double, 4> q{};
    double nn = 0;
    for (int k = 0; k < 4; ++k) {
        q[k] = counter_gaussian(99, i, k);
        nn += q[k] * q[k];
    }
    const double target = lo + (hi - lo) * counter_uniform(99, i, 9);
    const double fac = target / std::sqrt(nn);
    return PhasePoint{q[0] * fac, q[1] * fac, q[2] * fac, q[3] * fac};
}

}  // namespace

TEST_CASE("gauge-fixed ground state") {
    const QVector q{0.3, 0.2, 0.5, 0.1};
    const Matrix3 h = gellmann_compose(q);
    const GaugeFixedState s = ground_state_gauge_fixed(h);

    const double r = q.norm();
    CHECK(std::abs(s.v1 - Complex(0.3, -0.2) / r) < 1e-14);
    CHECK(std::abs(s.v2 - Complex(0.5, -0.1) / r) < 1e-14);

    const Vector3 psi = s.reconstruct();
    CHECK(std::abs(psi.norm() - 1.0) < 1e-14);
    CHECK(psi(1) == Complex(-1.0 / std::sqrt(2.0), 0.0));
    CHECK((h * psi - (-r) * psi).norm() < 1e-13);

    SECTION("eigensolver route agrees with the closed form") {
        const GaugeFixedState e = detail::ground_state_via_eigensolver(h, 0.0, GeometryOptions{});
        CHECK(std::abs(e.v1 - s.v1) < 1e-10);
        CHECK(std::abs(e.v2 - s.v2) < 1e-10);
    }
    SECTION("degenerate input is rejected") {
        CHECK_THROWS_AS(ground_state_gauge_fixed(Matrix3::Zero()), DegenerateGroundState);
        // the guard is relative to the matrix scale; widen it to force a trip
        GeometryOptions wide;
        wide.gap_min_rel = 10.0;
        CHECK_THROWS_AS(ground_state_gauge_fixed(gellmann_compose(QVector{1, 0, 0, 0}), wide),
                        DegenerateGroundState);
    }
    SECTION("non-chiral input is rejected on the eigensolver route") {
        Matrix3 m = Matrix3::Zero();
        m(0, 0) = 1;
        m(1, 1) = -2;
        m(2, 2) = 3;
        m(0, 2) = Complex(0.5, 0.1);
        m(2, 0) = std::conj(m(0, 2));
        CHECK_THROWS_AS(ground_state_gauge_fixed(m), NotChiral);
    }
}

TEST_CASE("tensor connection reference values and antisymmetry") {
    const Model m{CanonicalParams{}};
    const PhasePoint pt{0.3, 0.2, 0.5, 0.1};

    const Complex bxy = tensor_connection(m, pt, Axis::X, Axis::Y);
    CHECK(bxy.real() == Catch::Approx(-0.22495214977902891).margin(1e-12));
    CHECK(bxy.imag() == Catch::Approx(-0.33876486922345156).margin(1e-12));

    CHECK(std::abs(tensor_connection(m, pt, Axis::Y, Axis::X) + bxy) < 1e-15);
    CHECK(tensor_connection(m, pt, Axis::X, Axis::X) == Complex(0, 0));
}

TEST_CASE("curvature matches the analytic canonical oracle") {
    const Model m{CanonicalParams{}};
    double worst = 0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const PhasePoint pt = random_q_point(i, 0.5, 2.0);
        const QVector q{pt.x, pt.y, pt.z, pt.w};
        const double num = tensor_curvature(m, pt, Axis::X, Axis::Y, Axis::Z);
        const double ana = analytic_curvature_canonical(q, Axis::X, Axis::Y, Axis::Z);
        worst = std::max(worst, std::abs(num - ana) / std::max(std::abs(ana), 1e-12));
    }
    CHECK(worst < 1e-3);

    SECTION("second-order convergence in the steps") {
        const PhasePoint pt{0.3, 0.2, 0.5, 0.1};
        const double ana =
            analytic_curvature_canonical(QVector{0.3, 0.2, 0.5, 0.1}, Axis::X, Axis::Y, Axis::Z);
        const double e1 = std::abs(tensor_curvature(m, pt, Axis::X, Axis::Y, Axis::Z, 2e-3, 2e-3) - ana);
        const double e2 = std::abs(tensor_curvature(m, pt, Axis::X, Axis::Y, Axis::Z, 1e-3, 1e-3) - ana);
        CHECK(e1 / e2 > 2.5);
        CHECK(e1 / e2 < 6.0);
    }
    SECTION("frozen curvature value") {
        const PhasePoint pt{0.3, 0.2, 0.5, 0.1};
        CHECK(tensor_curvature(m, pt, Axis::X, Axis::Y, Axis::Z) ==
              Catch::Approx(0.65746395082391307).margin(1e-12));
    }
    SECTION("repeated indices vanish identically") {
        const PhasePoint pt{0.3, 0.2, 0.5, 0.1};
        CHECK(tensor_curvature(m, pt, Axis::X, Axis::X, Axis::Z) == 0.0);
    }
    SECTION("index antisymmetry within stencil tolerance") {
        const PhasePoint pt{0.3, 0.2, 0.5, 0.1};
        const double a = tensor_curvature(m, pt, Axis::X, Axis::Y, Axis::Z);
        const double b = tensor_curvature(m, pt, Axis::Y, Axis::X, Axis::Z);
        CHECK(a + b == Catch::Approx(0.0).margin(1e-8 * std::abs(a)));
    }
}

TEST_CASE("analytic canonical curvature") {
    const QVector q{0.3, 0.2, 0.5, 0.1};
    const double n4 = std::pow(q.norm(), 4);
    CHECK(analytic_curvature_canonical(q, Axis::X, Axis::Y, Axis::Z) == Catch::Approx(0.1 / n4));
    CHECK(analytic_curvature_canonical(q, Axis::X, Axis::Y, Axis::W) == Catch::Approx(-0.5 / n4));
    CHECK(analytic_curvature_canonical(q, Axis::X, Axis::Y, Axis::X) == 0.0);
    CHECK(analytic_curvature_canonical(q, Axis::Y, Axis::X, Axis::Z) ==
          -analytic_curvature_canonical(q, Axis::X, Axis::Y, Axis::Z));
    CHECK_THROWS_AS(analytic_curvature_canonical(QVector{0, 0, 0, 0}, Axis::X, Axis::Y, Axis::Z),
                    SingularPoint);
}

TEST_CASE("chart choice does not affect the curvature") {
    const Model m{CanonicalParams{}};
    const PhasePoint pt{0.3, 0.2, 0.5, 0.1};
    auto curv_in_chart = [&](Chart chart) {
        const GaugeFixedState c = ground_state_gauge_fixed(m.hamiltonian(pt));
        const double th = std::arg(chart == Chart::Standard ? c.v2 : c.v1);
        const std::array<std::array<Axis, 3>, 3> cyc{
            {{Axis::X, Axis::Y, Axis::Z}, {Axis::Y, Axis::Z, Axis::X}, {Axis::Z, Axis::X, Axis::Y}}};
        Complex sum(0, 0);
        for (const auto& [da, ba, bb] : cyc) {
            const Complex bp = detail::connection_impl(m, pt.shifted(da, 1e-3), ba, bb, 1e-3, chart,
                                                       th, GeometryOptions{});
            const Complex bm = detail::connection_impl(m, pt.shifted(da, -1e-3), ba, bb, 1e-3, chart,
                                                       th, GeometryOptions{});
            sum += (bp - bm) / 2e-3;
        }
        return 0.5 * sum.real();
    };
    const double st = curv_in_chart(Chart::Standard);
    const double sw = curv_in_chart(Chart::Swapped);
    // the charts share the limit but not the O(h^2) discretization error
    CHECK(st == Catch::Approx(sw).epsilon(1e-4));
}

TEST_CASE("curvature is gauge invariant") {
    const Model m{CircuitParams{}};
    GeometryOptions base;
    base.force_eigensolver = true;
    GeometryOptions gauged = base;
    gauged.gauge = [](const PhasePoint& p) { return 0.7 * p.x + 0.3 * std::sin(p.y); };

    for (int i = 0; i < 5; ++i) {
        const PhasePoint pt{0.5 + 0.31 * i, -0.4 + 0.23 * i, 1.1 - 0.17 * i, 0.3 + 0.29 * i};
        const double a = tensor_curvature(m, pt, Axis::X, Axis::Y, Axis::Z, 1e-3, 1e-3, base);
        const double b = tensor_curvature(m, pt, Axis::X, Axis::Y, Axis::Z, 1e-3, 1e-3, gauged);
        CHECK(std::abs(a - b) < 1e-6);
    }
}

TEST_CASE("imaginary-residue guard triggers when the bound is zeroed") {
    const Model m{CanonicalParams{}};
    GeometryOptions strict;
    strict.imag_abs = 0.0;
    strict.imag_rel = 0.0;
    CHECK_THROWS_AS(tensor_curvature(m, PhasePoint{0.3, 0.2, 0.5, 0.1}, Axis::X, Axis::Y, Axis::Z,
                                     1e-3, 1e-3, strict),
                    ImaginaryResidue);
}

TEST_CASE("curvature near a degeneracy raises DegeneracyTooClose") {
    const Model m{CanonicalParams{}};
    CHECK_THROWS_AS(tensor_curvature(m, PhasePoint{0, 0, 0, 0}, Axis::X, Axis::Y, Axis::Z),
                    DegeneracyTooClose);
}

TEST_CASE("quantum geometric tensor") {
    const Model m{CircuitParams{}};
    const PhasePoint pt{0.8, -0.3, 1.2, 0.5};
    const Eigen::Matrix4cd q = qgt(m, pt);

    SECTION("hermitian with non-negative diagonal") {
        CHECK((q - q.adjoint()).norm() < 1e-12);
        for (int i = 0; i < 4; ++i) {
            CHECK(q(i, i).imag() == 0.0);
            CHECK(q(i, i).real() >= 0.0);
        }
    }
    SECTION("real part symmetric, imaginary part antisymmetric") {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                CHECK(q(i, j).real() == Catch::Approx(q(j, i).real()).margin(1e-12));
                CHECK(q(i, j).imag() == Catch::Approx(-q(j, i).imag()).margin(1e-12));
            }
    }
    SECTION("invariant under re-phasing") {
        GeometryOptions gauged;
        gauged.gauge = [](const PhasePoint& p) { return 0.7 * p.x + 0.3 * std::sin(p.y); };
        const Eigen::Matrix4cd g = qgt(m, pt, 1e-4, gauged);
        CHECK((q - g).cwiseAbs().maxCoeff() < 1e-6);
    }
    SECTION("frozen canonical value") {
        const Model mc{CanonicalParams{}};
        const Eigen::Matrix4cd qc = qgt(mc, PhasePoint{0.3, 0.2, 0.5, 0.1});
        CHECK(qc(0, 0).real() == Catch::Approx(0.92044706703145573).margin(1e-9));
        CHECK(qc(0, 1).imag() == Catch::Approx(-0.85470084817371905).margin(1e-9));
    }
}
