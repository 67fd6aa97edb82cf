#pragma once

// Shared test helpers: the truncated-series exponential oracle and profile
// constructions used across suites. Oracles here are independent of the
// library's closed-form paths.

#include <cmath>
#include <vector>

#include "qbl/algebra.hpp"
#include "qbl/profile.hpp"

namespace qbl_test {

// 30-term truncated power series for exp(A); independent of the closed form.
inline qbl::Matrix2 exp_series(const qbl::Matrix2& a, int terms = 30) {
    qbl::Matrix2 term = qbl::Matrix2::identity();
    qbl::Matrix2 sum = qbl::Matrix2::identity();
    for (int k = 1; k <= terms; ++k) {
        term = qbl::Complex(1.0 / k) * (term * a);
        sum = sum + term;
    }
    return sum;
}

// Random traceless matrix with Frobenius norm <= scale; expects a sampler
// constructed with h_max = 1 so sampled_h is uniform on [0, 1].
inline qbl::Matrix2 random_traceless(const qbl::Sampler& s, std::uint64_t i, double scale) {
    return (scale * s.sampled_h(i)) * s.direction(i).realize();
}

// Grid sampling of theta(tau) = (m/4 + a) tau + eps (1 - cos(w tau)) for
// tau <= 2 pi / w, continued with slope m/4 + a beyond: delta is nondecreasing
// but not midpoint-convex. With a fine grid and a tiny eps the probe stays
// silent and certification lands Inconclusive.
inline qbl::RhoProfile wiggle_profile(int m, double a = 0.25, double eps = 3e-8, double w = 6.0,
                                      double h_hi = 4.0, int n = 3201) {
    const double tau0 = 2.0 * qbl::kPi / w;
    std::vector<double> lr;
    lr.reserve(static_cast<std::size_t>(n));
    for (double h : qbl::uniform_grid(0.0, h_hi, n)) {
        const double tau = qbl::tau_of_h(h);
        const double d = a * tau + (tau < tau0 ? eps * (1.0 - std::cos(w * tau)) : 0.0);
        lr.push_back(0.25 * m * tau + d);
    }
    return qbl::RhoProfile::grid(h_hi, std::move(lr));
}

// Coarse grid sampling of (cosh 2h)^alpha. The piecewise-linear interpolant
// has genuinely concave arcs in tau between the nodes, so for alpha > m/2 the
// necessary tests pass while the submean probe finds a real violation.
inline qbl::RhoProfile coarse_cosh_profile(double alpha, double h_hi = 3.0, int n = 101) {
    std::vector<double> lr;
    lr.reserve(static_cast<std::size_t>(n));
    for (double h : qbl::uniform_grid(0.0, h_hi, n)) lr.push_back(alpha * qbl::log_cosh(2.0 * h));
    return qbl::RhoProfile::grid(h_hi, std::move(lr));
}

}  // namespace qbl_test
