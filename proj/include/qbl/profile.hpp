#pragma once

// Radial profiles rho: R -> R^{>0}, even by construction, and the transforms
// used to certify disc bundles of weight m:
//
//   rho_max(h) = (cosh 2h)^{|m|/2}        the extremal normalized profile
//   tau(h)     = log(st) = 2 log cosh 2h  invariant change of variable
//   theta(tau) = log rho(1/2 arccosh e^{tau/2})
//   delta(tau) = theta(tau) - (m/4) tau   the Stein/hyperbolicity discriminant
//
// Grid profiles store log rho on a uniform grid over [0, h_max], interpolate
// linearly in log space (positivity is automatic) and extend beyond h_max
// with the last stored slope, so log-convexity is a second-difference test on
// stored values.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qbl {

// log cosh v without overflow: |v| - log 2 + log1p(e^{-2|v|}).
inline double log_cosh(double v) {
    const double a = std::abs(v);
    return a - 0.6931471805599453094172321214581766 + std::log1p(std::exp(-2.0 * a));
}

// softplus: log(1 + e^u), stable for large |u|.
inline double log1p_exp(double u) {
    return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

struct RhoProfile {
    enum class Kind { CoshPower, Constant, Grid };

    Kind kind = Kind::Constant;
    double alpha = 0.0;            // CoshPower: rho(h) = (cosh 2h)^alpha
    double value = 1.0;            // Constant
    double h_max = 0.0;            // Grid
    std::vector<double> log_rho;   // Grid: log rho on a uniform grid over [0, h_max]

    static RhoProfile cosh_power(double alpha) {
        if (!(alpha >= 0.0)) throw std::invalid_argument("RhoProfile: alpha must be >= 0");
        RhoProfile p;
        p.kind = Kind::CoshPower;
        p.alpha = alpha;
        return p;
    }

    static RhoProfile constant(double c) {
        if (!(c > 0.0)) throw std::invalid_argument("RhoProfile: constant must be positive");
        RhoProfile p;
        p.kind = Kind::Constant;
        p.value = c;
        return p;
    }

    static RhoProfile grid(double h_max, std::vector<double> log_rho) {
        if (!(h_max > 0.0)) throw std::invalid_argument("RhoProfile: h_max must be positive");
        if (log_rho.size() < 2)
            throw std::invalid_argument("RhoProfile: grid needs at least two samples");
        for (double v : log_rho)
            if (!std::isfinite(v)) throw std::invalid_argument("RhoProfile: grid values must be finite");
        RhoProfile p;
        p.kind = Kind::Grid;
        p.h_max = h_max;
        p.log_rho = std::move(log_rho);
        return p;
    }
};

inline double log_eval_rho(const RhoProfile& p, double h) {
    const double a = std::abs(h);  // even by construction
    switch (p.kind) {
        case RhoProfile::Kind::CoshPower:
            return p.alpha * log_cosh(2.0 * a);
        case RhoProfile::Kind::Constant:
            return std::log(p.value);
        case RhoProfile::Kind::Grid: {
            const std::size_t n = p.log_rho.size();
            const double step = p.h_max / static_cast<double>(n - 1);
            if (a >= p.h_max) {
                const double slope = (p.log_rho[n - 1] - p.log_rho[n - 2]) / step;
                return p.log_rho[n - 1] + slope * (a - p.h_max);
            }
            const double pos = a / step;
            const std::size_t i = std::min(static_cast<std::size_t>(pos), n - 2);
            const double f = pos - static_cast<double>(i);
            return p.log_rho[i] * (1.0 - f) + p.log_rho[i + 1] * f;
        }
    }
    throw std::logic_error("log_eval_rho: unreachable");
}

inline double eval_rho(const RhoProfile& p, double h) { return std::exp(log_eval_rho(p, h)); }

// Divide by rho(0) so that rho(0) = 1.
inline RhoProfile normalize(const RhoProfile& p) {
    RhoProfile q = p;
    switch (p.kind) {
        case RhoProfile::Kind::CoshPower:
            break;  // rho(0) = 1 already
        case RhoProfile::Kind::Constant:
            q.value = 1.0;
            break;
        case RhoProfile::Kind::Grid: {
            const double l0 = p.log_rho[0];
            for (double& v : q.log_rho) v -= l0;
            break;
        }
    }
    return q;
}

inline bool is_normalized(const RhoProfile& p, double tol = 1e-12) {
    return std::abs(log_eval_rho(p, 0.0)) <= tol;
}

inline double log_rho_max(int m, double h) { return 0.5 * std::abs(m) * log_cosh(2.0 * h); }
inline double rho_max(int m, double h) { return std::exp(log_rho_max(m, h)); }

// tau = 2 log cosh 2h and its inverse h = 1/2 arccosh e^{tau/2}; mutually
// inverse bijections [0, inf) -> [0, inf).
inline double tau_of_h(double h) {
    if (!(h >= 0.0)) throw std::domain_error("tau_of_h: h must be >= 0");
    return 2.0 * log_cosh(2.0 * h);
}

inline double h_of_tau(double tau) {
    if (!(tau >= 0.0)) throw std::domain_error("h_of_tau: tau must be >= 0");
    // arccosh(e^{tau/2}) = tau/2 + log1p(sqrt(1 - e^{-tau})), stable for all tau
    return 0.5 * (0.5 * tau + std::log1p(std::sqrt(-std::expm1(-tau))));
}

inline double theta(const RhoProfile& p, double tau) {
    if (!(tau >= 0.0)) throw std::domain_error("theta: tau must be >= 0");
    return log_eval_rho(p, h_of_tau(tau));
}

// delta(tau) = theta(tau) - (m/4) tau, for positive weight; callers reduce
// m < 0 by duality and m = 0 bypasses delta entirely.
inline double delta(const RhoProfile& p, int m, double tau) {
    if (m <= 0) throw std::invalid_argument("delta: weight must be positive");
    return theta(p, tau) - 0.25 * static_cast<double>(m) * tau;
}

inline std::vector<double> uniform_grid(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) throw std::invalid_argument("uniform_grid: bad range");
    std::vector<double> g(static_cast<std::size_t>(n));
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + step * i;
    g.back() = hi;
    return g;
}

// Midpoint-convexity of log rho on consecutive grid triples. The margin is
// twice the chord defect, which on a uniform grid is the plain second
// difference f(h-) - 2 f(h0) + f(h+); pass iff every margin >= -1e-10.
struct ConvexityReport {
    bool passes = true;
    double worst_margin = 0.0;
    double h_lo = 0.0, h_mid = 0.0, h_hi = 0.0;  // worst triple
};

inline ConvexityReport check_log_convex(const RhoProfile& p, const std::vector<double>& h_grid) {
    static constexpr double tol = 1e-10;
    const std::size_t n = h_grid.size();
    if (n < 3) throw std::invalid_argument("check_log_convex: need at least 3 grid points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(h_grid[i] > h_grid[i - 1]))
            throw std::invalid_argument("check_log_convex: grid must be strictly increasing");

    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = log_eval_rho(p, h_grid[i]);

    ConvexityReport r;
    bool first = true;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double mu = (h_grid[i] - h_grid[i - 1]) / (h_grid[i + 1] - h_grid[i - 1]);
        const double chord = (1.0 - mu) * f[i - 1] + mu * f[i + 1];
        const double margin = 2.0 * (chord - f[i]);
        if (first || margin < r.worst_margin) {
            first = false;
            r.worst_margin = margin;
            r.h_lo = h_grid[i - 1];
            r.h_mid = h_grid[i];
            r.h_hi = h_grid[i + 1];
        }
    }
    r.passes = r.worst_margin >= -tol;
    return r;
}

}  // namespace qbl
