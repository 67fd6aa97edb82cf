#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qbl/profile.hpp"

using namespace qbl;

TEST_CASE("profile construction validates its parameters") {
    CHECK_THROWS_AS(RhoProfile::cosh_power(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(RhoProfile::constant(0.0), std::invalid_argument);
    CHECK_THROWS_AS(RhoProfile::grid(-1.0, {0.0, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(RhoProfile::grid(1.0, {0.0}), std::invalid_argument);
}

TEST_CASE("profile evaluation") {
    CHECK(eval_rho(RhoProfile::constant(1.0), 5.0) == 1.0);
    CHECK(std::abs(eval_rho(RhoProfile::cosh_power(1.0), 1.0) - std::cosh(2.0)) < 1e-13);

    const RhoProfile p = RhoProfile::cosh_power(0.7);
    for (double h : {0.3, 1.7, 4.0}) CHECK(eval_rho(p, -h) == eval_rho(p, h));
}

TEST_CASE("grid profiles interpolate log rho and extend with the last slope") {
    const RhoProfile g = RhoProfile::grid(2.0, {0.0, 0.2, 0.8, 1.0, 1.6});
    CHECK(log_eval_rho(g, 0.0) == 0.0);
    CHECK(std::abs(log_eval_rho(g, 0.25) - 0.1) < 1e-15);    // midpoint of first cell
    CHECK(std::abs(log_eval_rho(g, 1.5) - 1.0) < 1e-15);     // node value
    CHECK(std::abs(log_eval_rho(g, 2.0) - 1.6) < 1e-15);
    // last slope is (1.6 - 1.0) / 0.5 = 1.2
    CHECK(std::abs(log_eval_rho(g, 3.0) - (1.6 + 1.2)) < 1e-14);
    CHECK(log_eval_rho(g, -0.25) == log_eval_rho(g, 0.25));
}

TEST_CASE("normalization") {
    const RhoProfile c = normalize(RhoProfile::constant(3.0));
    CHECK(eval_rho(c, 0.0) == 1.0);

    const RhoProfile p = RhoProfile::cosh_power(0.8);
    CHECK(std::abs(eval_rho(normalize(p), 0.0) - 1.0) <= 1e-15);

    const RhoProfile g = normalize(RhoProfile::grid(1.0, {0.7, 1.0, 1.4}));
    CHECK(g.log_rho[0] == 0.0);
    CHECK(std::abs(g.log_rho[1] - 0.3) < 1e-15);
    CHECK(is_normalized(g));

    // idempotent
    const RhoProfile gg = normalize(g);
    CHECK(gg.log_rho == g.log_rho);
}

TEST_CASE("normalize preserves log-convexity verdicts") {
    const std::vector<double> grid = uniform_grid(0.0, 3.0, 61);
    const RhoProfile convex = RhoProfile::grid(3.0, [] {
        std::vector<double> v;
        for (double h : uniform_grid(0.0, 3.0, 31)) v.push_back(0.5 + h * h);
        return v;
    }());
    const RhoProfile concave = RhoProfile::grid(3.0, [] {
        std::vector<double> v;
        for (double h : uniform_grid(0.0, 3.0, 31)) v.push_back(0.5 - h * h);
        return v;
    }());
    CHECK(check_log_convex(convex, grid).passes == check_log_convex(normalize(convex), grid).passes);
    CHECK(check_log_convex(concave, grid).passes == check_log_convex(normalize(concave), grid).passes);
    CHECK(check_log_convex(concave, grid).passes == false);
}

TEST_CASE("extremal profile values") {
    CHECK(rho_max(2, 0.0) == 1.0);
    CHECK(std::abs(rho_max(2, 1.0) - std::cosh(2.0)) < 1e-13);
    CHECK(rho_max(0, 2.7) == 1.0);
    CHECK(rho_max(-2, 1.0) == rho_max(2, 1.0));
}

TEST_CASE("theta closed forms") {
    const RhoProfile p = RhoProfile::cosh_power(0.8);
    CHECK(theta(p, 0.0) == 0.0);
    for (double tau : {0.3, 2.0, 11.0})
        CHECK(std::abs(theta(p, tau) - 0.4 * tau) < 1e-12);
    // the extremal exponent alpha = m/2 gives theta = (m/4) tau
    const RhoProfile pm = RhoProfile::cosh_power(1.5);
    for (double tau : {0.5, 7.0})
        CHECK(std::abs(theta(pm, tau) - 0.75 * tau) < 1e-12);
    CHECK_THROWS_AS(theta(p, -0.1), std::domain_error);
}

TEST_CASE("delta closed forms") {
    const RhoProfile pmax = RhoProfile::cosh_power(1.0);  // m = 2 extremal
    for (double tau : {0.0, 1.0, 9.0}) CHECK(std::abs(delta(pmax, 2, tau)) < 1e-12);

    const RhoProfile p = RhoProfile::cosh_power(1.5);
    for (double tau : {0.4, 3.0, 15.0})
        CHECK(std::abs(delta(p, 2, tau) - 0.25 * tau) < 1e-12);

    CHECK(delta(p, 2, 0.0) == 0.0);
    CHECK_THROWS_AS(delta(p, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(delta(p, -2, 1.0), std::invalid_argument);
}

TEST_CASE("log-convexity checks") {
    const std::vector<double> grid = uniform_grid(0.0, 3.0, 61);
    const ConvexityReport flat = check_log_convex(RhoProfile::constant(1.0), grid);
    CHECK(flat.passes);
    CHECK(flat.worst_margin == 0.0);

    CHECK(check_log_convex(RhoProfile::cosh_power(1.0), grid).passes);

    std::vector<double> concave;
    for (double h : uniform_grid(0.0, 3.0, 61)) concave.push_back(-h * h);
    const ConvexityReport bad = check_log_convex(RhoProfile::grid(3.0, concave), grid);
    CHECK_FALSE(bad.passes);
    CHECK(bad.worst_margin < 0.0);
    // the stored triple reproduces the violation
    const RhoProfile gp = RhoProfile::grid(3.0, concave);
    const double f0 = log_eval_rho(gp, bad.h_lo), f1 = log_eval_rho(gp, bad.h_mid),
                 f2 = log_eval_rho(gp, bad.h_hi);
    CHECK(f0 - 2.0 * f1 + f2 < -1e-10);

    CHECK_THROWS_AS(check_log_convex(RhoProfile::constant(1.0), {0.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_log_convex(RhoProfile::constant(1.0), {0.0, 1.0, 0.5}),
                    std::invalid_argument);
}

TEST_CASE("tau and h are inverse bijections") {
    CHECK(tau_of_h(0.0) == 0.0);
    CHECK(std::abs(tau_of_h(1.0) - 2.0 * std::log(std::cosh(2.0))) < 1e-14);
    CHECK(h_of_tau(0.0) == 0.0);
    double worst = 0.0;
    for (double h : uniform_grid(0.0, 6.0, 100))
        worst = std::max(worst, std::abs(h_of_tau(tau_of_h(h)) - h));
    CHECK(worst <= 1e-12);
    for (double tau : uniform_grid(0.0, 30.0, 100))
        worst = std::max(worst, std::abs(tau_of_h(h_of_tau(tau)) - tau) / std::max(1.0, tau));
    CHECK(worst <= 1e-12);
    CHECK_THROWS_AS(tau_of_h(-1.0), std::domain_error);
    CHECK_THROWS_AS(h_of_tau(-1.0), std::domain_error);
}

TEST_CASE("change of variable is consistent with direct evaluation") {
    for (const RhoProfile& p :
         {RhoProfile::cosh_power(1.2), RhoProfile::constant(1.0),
          RhoProfile::grid(2.5, {0.0, 0.1, 0.5, 0.9, 1.8, 2.0})}) {
        double worst = 0.0;
        for (double h : uniform_grid(0.0, 4.0, 81))
            worst = std::max(worst, std::abs(theta(p, tau_of_h(h)) - log_eval_rho(p, h)));
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("delta vanishes identically iff the profile is extremal on the induced grid") {
    const int m = 3;
    const RhoProfile pmax = RhoProfile::cosh_power(0.5 * m);
    double worst = 0.0;
    for (double tau : uniform_grid(0.0, 14.0, 141))
        worst = std::max(worst, std::abs(delta(pmax, m, tau)));
    CHECK(worst <= 1e-10);

    // and conversely: vanishing delta pins rho to rho_max at the induced h
    const RhoProfile other = RhoProfile::cosh_power(0.5 * m + 0.25);
    bool all_zero = true;
    for (double tau : uniform_grid(0.0, 14.0, 141))
        if (std::abs(delta(other, m, tau)) > 1e-10) all_zero = false;
    CHECK_FALSE(all_zero);
    for (double tau : {0.5, 3.0}) {
        const double h = h_of_tau(tau);
        if (std::abs(delta(other, m, tau)) > 1e-10)
            CHECK(std::abs(eval_rho(other, h) - rho_max(m, h)) > 1e-10);
    }
}
