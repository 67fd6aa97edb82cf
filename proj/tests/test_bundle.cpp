#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "qbl/bundle.hpp"

using namespace qbl;

namespace {
const Complex kI(0.0, 1.0);
}

TEST_CASE("same point recognizes the equivalence") {
    const BundlePoint p{GroupElement::identity(), 1.0, 2};
    CHECK(same_point(p, p, 1e-12));

    const Complex kappa = 2.0 * std::polar(1.0, kPi / 5.0);
    const BundlePoint q{GroupElement::unchecked(torus_factor(kappa)), ipow(1.0 / kappa, 2), 2};
    CHECK(same_point(p, q, 1e-12));

    const BundlePoint r{GroupElement::unchecked(radial_factor(1.0)), 1.0, 2};
    CHECK_FALSE(same_point(p, r, 1e-12));

    const BundlePoint wrong_weight{GroupElement::identity(), 1.0, 3};
    CHECK_THROWS_AS(same_point(p, wrong_weight, 1e-12), std::invalid_argument);
}

TEST_CASE("fiber norm on closed-form points") {
    const RhoProfile rmax1 = RhoProfile::cosh_power(0.5);  // extremal for |m| = 1
    CHECK(fiber_norm({GroupElement::identity(), 0.5, 1}, rmax1) == 0.5);

    const RhoProfile one = RhoProfile::constant(1.0);
    CHECK(std::abs(fiber_norm({GroupElement(Matrix2::diagonal(2.0, 0.5)), 1.0, 1}, one) - 0.5) <
          1e-15);
}

TEST_CASE("fiber norm is representative-independent and unitary-invariant") {
    const Sampler s(31, 1.0, 0.3);
    const SampleStream st(32);
    for (int m : {1, 2, 5}) {
        const RhoProfile rho = RhoProfile::cosh_power(0.5 * m);
        double worst_rep = 0.0, worst_uni = 0.0;
        for (std::uint64_t i = 0; i < 400; ++i) {
            const GroupElement g = s.group(i);
            const Complex z = std::polar(0.2 + st.uniform(3 * i), 2.0 * kPi * st.uniform(3 * i + 1));
            const BundlePoint p{g, z, m};

            const Complex kappa =
                std::polar(std::exp(0.6 * (st.uniform(3 * i + 2) - 0.5)), 2.0 * kPi * st.uniform(3 * i + 1));
            const BundlePoint q{GroupElement::unchecked(g.m * torus_factor(kappa)),
                                ipow(1.0 / kappa, m) * z, m};
            REQUIRE(same_point(p, q, 1e-9));
            worst_rep = std::max(worst_rep, std::abs(fiber_norm(p, rho) - fiber_norm(q, rho)));

            const GroupElement u = s.haar_su2(i + 50000);
            const BundlePoint pu{u * g, z, m};
            worst_uni = std::max(worst_uni, std::abs(fiber_norm(p, rho) - fiber_norm(pu, rho)));
        }
        CHECK(worst_rep <= 1e-12);
        CHECK(worst_uni <= 1e-10);
    }
}

TEST_CASE("membership classifies interior, boundary, exterior") {
    const RhoProfile rmax = RhoProfile::cosh_power(0.5);  // |m| = 1
    CHECK(membership({GroupElement::identity(), 0.5, 1}, rmax, false) == Region::Interior);
    CHECK(membership({GroupElement::identity(), 1.0, 1}, rmax, false) == Region::Boundary);
    CHECK(membership({GroupElement::identity(), 1.5, 1}, rmax, false) == Region::Exterior);
    CHECK(membership({GroupElement::identity(), 0.0, 1}, rmax, false) == Region::Interior);
    CHECK(membership({GroupElement::identity(), 0.0, 1}, rmax, true) == Region::Exterior);
}

TEST_CASE("covering membership") {
    CHECK(cover_membership(GroupElement(Matrix2::diagonal(2.0, 0.5)), RhoProfile::constant(1.0), 1));
    CHECK_FALSE(cover_membership(GroupElement::identity(), RhoProfile::constant(1.0), 1));
    CHECK_THROWS_AS(cover_membership(GroupElement::identity(), RhoProfile::constant(1.0), 0),
                    std::invalid_argument);

    // for the extremal profile, membership is exactly t < 1
    const Sampler s(33, 3.0, 2.0);
    const RhoProfile rmax = RhoProfile::cosh_power(1.0);  // m = 2
    for (std::uint64_t i = 0; i < 2000; ++i) {
        const GroupElement g = s.group(i);
        CHECK(cover_membership(g, rmax, 2) == (coords(g).t < 1.0));
    }
}

TEST_CASE("covering projection and the deck group") {
    const BundlePoint p = cover_project(GroupElement::identity(), 3);
    CHECK(p.z == Complex(1.0, 0.0));
    CHECK_THROWS_AS(cover_project(GroupElement::identity(), 0), std::invalid_argument);

    const Sampler s(34, 1.5, 1.0);
    for (int m : {2, 3, 5}) {
        for (std::uint64_t i = 0; i < 50; ++i) {
            const GroupElement g = s.group(i);
            for (int k = 0; k < m; ++k) {
                const Complex gamma = std::polar(1.0, 2.0 * kPi * k / m);
                const GroupElement gg = GroupElement::unchecked(g.m * torus_factor(gamma));
                CHECK(same_point(cover_project(g, m), cover_project(gg, m), 1e-12));
            }
        }
    }

    // a non-root torus element moves the point
    const GroupElement g = s.group(0);
    const GroupElement gk = GroupElement::unchecked(g.m * torus_factor(Complex(2.0)));
    CHECK_FALSE(same_point(cover_project(g, 3), cover_project(gk, 3), 1e-12));
}

TEST_CASE("duality inverts the torus and flips the radial flow") {
    const BundlePoint pr{GroupElement::unchecked(radial_factor(0.9)), 1.0, 2};
    CHECK(frobenius_distance(dual_map(pr).g.m, radial_factor(-0.9)) <= 1e-15);

    const Complex zeta(1.3, 0.4);
    const BundlePoint pt{GroupElement::unchecked((1.0 / std::abs(zeta)) * torus_factor(zeta)), 1.0,
                         2};
    // phi(diag(zeta^{-1}, zeta)) = diag(zeta, zeta^{-1}) up to the same scaling
    CHECK(frobenius_distance(dual_map(pt).g.m,
                             (1.0 / std::abs(zeta)) * torus_factor(1.0 / zeta)) <= 1e-15);
}

TEST_CASE("duality preserves norms, membership, and squares to the identity") {
    const Sampler s(35, 1.2, 0.8);
    const SampleStream st(36);
    for (int m : {1, 2}) {
        const RhoProfile rho = RhoProfile::cosh_power(0.5 * m);
        for (std::uint64_t i = 0; i < 500; ++i) {
            const Complex z = std::polar(1.6 * st.uniform(2 * i), 2.0 * kPi * st.uniform(2 * i + 1));
            const BundlePoint p{s.group(i), z, m};
            const BundlePoint q = dual_map(p);
            CHECK(q.m == -m);
            CHECK(std::abs(fiber_norm(p, rho) - fiber_norm(q, rho)) <= 1e-12);
            CHECK(membership(p, rho, false) == membership(q, rho, false));
            CHECK(same_point(dual_map(q), p, 1e-12));
        }
    }
}

TEST_CASE("fiber projection reads the second column") {
    const FiberClass f0 = project_fiber({GroupElement::identity(), 1.0, 2});
    CHECK(f0.z3 == Complex(0.0));
    CHECK(f0.z4 == Complex(1.0));

    const FiberClass f1 = project_fiber({GroupElement::unchecked(radial_factor(1.0)), 1.0, 2});
    CHECK(std::abs(f1.z3 - (-kI * std::sinh(1.0))) < 1e-15);
    CHECK(std::abs(f1.z4 - std::cosh(1.0)) < 1e-15);

    CHECK_THROWS_AS(project_fiber({GroupElement::identity(), 0.0, 2}), std::invalid_argument);

    // |z3|^2 + |z4|^2 is the t-coordinate, by the same entry arithmetic
    const Sampler s(37, 2.0, 1.5);
    for (std::uint64_t i = 0; i < 200; ++i) {
        const GroupElement g = s.group(i);
        const FiberClass f = project_fiber({g, 1.0, 2});
        CHECK(std::norm(f.z3) + std::norm(f.z4) == coords(g).t);
    }
}

TEST_CASE("the quotient embedding") {
    const auto v = embed_iota({Complex(0.3), Complex(0.0, 0.4), 2});
    CHECK(std::abs(v[0] - Complex(0.09)) < 1e-15);
    CHECK(std::abs(v[1] - Complex(0.0, 0.12)) < 1e-15);
    CHECK(std::abs(v[2] - Complex(-0.16)) < 1e-15);

    // gamma = -1 at m = 2: exactly invariant
    const auto w = embed_iota({Complex(-0.3), Complex(0.0, -0.4), 2});
    CHECK(v[0] == w[0]);
    CHECK(v[1] == w[1]);
    CHECK(v[2] == w[2]);

    // m = 1 is the degenerate case (z3, z4, z4)
    const auto u = embed_iota({Complex(0.5, 0.1), Complex(-0.2, 0.7), 1});
    CHECK(u[0] == Complex(0.5, 0.1));
    CHECK(u[1] == Complex(-0.2, 0.7));
    CHECK(u[2] == Complex(-0.2, 0.7));

    CHECK_THROWS_AS(embed_iota({Complex(1.0), Complex(1.0), 0}), std::invalid_argument);

    // deck invariance for higher roots of unity
    for (int m : {3, 5}) {
        const FiberClass f{Complex(0.31, -0.2), Complex(0.1, 0.44), m};
        for (int k = 1; k < m; ++k) {
            const Complex gamma = std::polar(1.0, 2.0 * kPi * k / m);
            const FiberClass fg{gamma * f.z3, gamma * f.z4, m};
            const auto a = embed_iota(f), b = embed_iota(fg);
            for (int c = 0; c < 3; ++c) CHECK(std::abs(a[c] - b[c]) <= 1e-12);
        }
    }
}

TEST_CASE("the tautological map") {
    const TautImage t0 = taut_map({GroupElement::identity(), Complex(0.3, 0.1), -1});
    CHECK(t0.line[0] == Complex(0.0));
    CHECK(t0.line[1] == Complex(1.0));
    CHECK(t0.point[0] == Complex(0.0));
    CHECK(t0.point[1] == Complex(0.3, 0.1));

    const TautImage t1 = taut_map({GroupElement::unchecked(radial_factor(1.0)), 1.0, -1});
    CHECK(std::abs(t1.line[0] - (-kI * std::sinh(1.0))) < 1e-15);
    CHECK(std::abs(t1.line[1] - std::cosh(1.0)) < 1e-15);

    CHECK_THROWS_AS(taut_map({GroupElement::identity(), 1.0, 1}), std::invalid_argument);

    // the vector lies on the line: cross product vanishes
    const Sampler s(38, 2.0, 1.5);
    const SampleStream st(39);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const Complex z = std::polar(st.uniform(2 * i), 2.0 * kPi * st.uniform(2 * i + 1));
        const TautImage t = taut_map({s.group(i), z, -1});
        worst = std::max(worst, std::abs(t.line[0] * t.point[1] - t.line[1] * t.point[0]));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("the additive action fixes t and satisfies the group law") {
    const GroupElement g0 = c_action(GroupElement::identity(), 0.0);
    CHECK(frobenius_distance(g0.m, Matrix2::identity()) == 0.0);

    const Complex w(0.3, 0.4);
    const InvariantCoords c = coords(c_action(GroupElement::identity(), w));
    CHECK(std::abs(c.s - 1.25) < 1e-15);
    CHECK(c.t == 1.0);

    const Sampler s(40, 1.5, 1.0);
    const SampleStream st(41);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const GroupElement g = s.group(i);
        const Complex w1(st.uniform(4 * i) - 0.5, st.uniform(4 * i + 1) - 0.5);
        const Complex w2(st.uniform(4 * i + 2) - 0.5, st.uniform(4 * i + 3) - 0.5);
        CHECK(coords(c_action(g, w1)).t == coords(g).t);  // second column untouched
        worst = std::max(worst,
                         frobenius_distance(c_action(c_action(g, w1), w2).m,
                                            c_action(g, w1 + w2).m));
    }
    CHECK(worst <= 1e-14);
}
