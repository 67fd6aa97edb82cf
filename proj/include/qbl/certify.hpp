#pragma once

// Stein certification of equivariant disc bundles and constructive
// hyperbolicity witnesses.
//
// A weight-m bundle of normalized profile rho is Stein iff the invariant
// function g -> |zeta|^m rho(h) is logarithmically plurisubharmonic. With
// tau = log s + log t the log of that function splits as
//
//   delta(tau) + (m/2) log t,        delta(tau) = theta(tau) - (m/4) tau,
//
// and log s, log t are plurisubharmonic (logs of column norms squared).
// This yields finitely checkable tests:
//
//   necessary:  log rho convex, delta nondecreasing;
//   sufficient: delta nondecreasing and midpoint-convex (a convex
//               nondecreasing function of a psh function is psh);
//   refutable:  a sampled circle on which the submean inequality fails.
//
// The three-valued verdict keeps the gap honest: only the analytic sufficient
// test certifies, only concrete reproducible evidence refutes.
//
// For a certified non-extremal profile, boundedness constants witnessing
// hyperbolicity of the punctured bundle: on covering elements whose fiber
// (z3, z4) stays in a ball compactly inside the punctured unit ball,
// t >= t_min gives C = -log t_min, delta(tau) < (m/2) C forces tau < D, and
// s < e^{D + C} =: s_bound.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbl/algebra.hpp"
#include "qbl/bundle.hpp"
#include "qbl/mostow.hpp"
#include "qbl/profile.hpp"

namespace qbl {

// ---------------------------------------------------------------------------
// Invariant functions probed for plurisubharmonicity.

enum class ProbeFn { LogS, LogT, LogNorm };

inline const char* probe_fn_name(ProbeFn fn) {
    switch (fn) {
        case ProbeFn::LogS: return "log_s";
        case ProbeFn::LogT: return "log_t";
        case ProbeFn::LogNorm: return "log_norm";
    }
    return "?";
}

inline ProbeFn parse_probe_fn(const std::string& id) {
    if (id == "log_s") return ProbeFn::LogS;
    if (id == "log_t") return ProbeFn::LogT;
    if (id == "log_norm") return ProbeFn::LogNorm;
    throw std::invalid_argument("unknown probe function id: " + id);
}

inline double invariant_log_s(const GroupElement& g) {
    return std::log(std::norm(g.m.z1) + std::norm(g.m.z2));
}

inline double invariant_log_t(const GroupElement& g) {
    return std::log(std::norm(g.m.z3) + std::norm(g.m.z4));
}

// log(|zeta|^m rho(h)) = m/4 (log t - log s) + log rho(h)
inline double invariant_log_norm(const GroupElement& g, const RhoProfile& rho, int m) {
    const InvariantCoords c = coords(g);
    return 0.25 * static_cast<double>(m) * std::log(c.t / c.s) + log_eval_rho(rho, radial(c));
}

// ---------------------------------------------------------------------------
// Submean probe: mean over the circle g exp(r e^{2 pi i j / K} V) minus the
// center value. Negative beyond rounding refutes plurisubharmonicity along
// that disc; margin / r^2 estimates the Levi form in the direction V.

struct ProbeParams {
    std::uint64_t seed = 1;
    int samples = 2000;
    double radius = 0.05;
    int circle_points = 64;
    double h_max = 3.0;
    double x_max = 2.0;
};

struct SubmeanReport {
    ProbeFn fn = ProbeFn::LogS;
    int samples = 0;
    double radius = 0.0;
    int circle_points = 0;
    double worst_margin = 0.0;
    GroupElement worst_g = GroupElement::identity();
    AlgebraVector worst_v{};
    double levi_min = 0.0, levi_mean = 0.0, levi_max = 0.0;
};

template <typename Fn>
inline double submean_margin(Fn&& fn, const GroupElement& g, const Matrix2& v, double radius,
                             int circle_points) {
    const double center = fn(g);
    double acc = 0.0;
    for (int j = 0; j < circle_points; ++j) {
        const double t = 2.0 * kPi * static_cast<double>(j) / circle_points;
        const Complex w = std::polar(radius, t);
        const GroupElement gw = GroupElement::unchecked(g.m * exp_traceless(w * v).m);
        acc += fn(gw);
    }
    return acc / circle_points - center;
}

inline SubmeanReport submean_probe(ProbeFn fn, const ProbeParams& p,
                                   const RhoProfile* rho = nullptr, int m = 0) {
    if (!(p.radius > 1e-4 && p.radius < 0.5))
        throw std::invalid_argument("submean_probe: radius must lie in (1e-4, 0.5)");
    if (p.circle_points < 16)
        throw std::invalid_argument("submean_probe: need at least 16 circle points");
    if (p.samples < 1) throw std::invalid_argument("submean_probe: need at least one sample");
    if (fn == ProbeFn::LogNorm && rho == nullptr)
        throw std::invalid_argument("submean_probe: log_norm requires a profile");

    const auto eval = [&](const GroupElement& g) {
        switch (fn) {
            case ProbeFn::LogS: return invariant_log_s(g);
            case ProbeFn::LogT: return invariant_log_t(g);
            case ProbeFn::LogNorm: return invariant_log_norm(g, *rho, m);
        }
        return 0.0;
    };

    const Sampler sampler(p.seed, p.h_max, p.x_max);
    SubmeanReport r;
    r.fn = fn;
    r.samples = p.samples;
    r.radius = p.radius;
    r.circle_points = p.circle_points;
    r.worst_margin = std::numeric_limits<double>::infinity();
    r.levi_min = std::numeric_limits<double>::infinity();
    r.levi_max = -std::numeric_limits<double>::infinity();
    double levi_sum = 0.0;
    const double inv_r2 = 1.0 / (p.radius * p.radius);

    for (int i = 0; i < p.samples; ++i) {
        const GroupElement g = sampler.group(static_cast<std::uint64_t>(i));
        const AlgebraVector v = sampler.direction(static_cast<std::uint64_t>(i));
        const double margin = submean_margin(eval, g, v.realize(), p.radius, p.circle_points);
        const double levi = margin * inv_r2;
        if (margin < r.worst_margin) {
            r.worst_margin = margin;
            r.worst_g = g;
            r.worst_v = v;
        }
        levi_sum += levi;
        r.levi_min = std::min(r.levi_min, levi);
        r.levi_max = std::max(r.levi_max, levi);
    }
    r.levi_mean = levi_sum / p.samples;
    return r;
}

// ---------------------------------------------------------------------------
// delta on a uniform tau grid with consistency flags.

struct DeltaReport {
    std::vector<double> tau_grid;
    std::vector<double> delta_values;
    bool monotone = true;
    bool midpoint_convex = true;
    bool divergent = false;
    bool identically_zero = false;
    double worst_step = 0.0;        // min of delta[i+1] - delta[i]
    std::size_t worst_step_index = 0;
    double worst_second_diff = 0.0;  // min of delta[i-1] - 2 delta[i] + delta[i+1]
    std::size_t worst_second_diff_index = 0;
};

inline constexpr double kDeltaFlagTol = 1e-10;
inline constexpr double kDeltaZeroTol = 1e-12;

inline DeltaReport delta_report(const RhoProfile& rho, int m, double tau_max, int steps) {
    const int mm = std::abs(m);
    if (mm == 0) throw std::invalid_argument("delta_report: weight must be nonzero");
    if (!(tau_max > 0.0) || steps < 2) throw std::invalid_argument("delta_report: bad grid");

    DeltaReport r;
    r.tau_grid = uniform_grid(0.0, tau_max, steps + 1);
    r.delta_values.reserve(r.tau_grid.size());
    for (double tau : r.tau_grid) r.delta_values.push_back(delta(rho, mm, tau));

    const auto& d = r.delta_values;
    const std::size_t n = d.size();
    double max_abs = 0.0;
    r.worst_step = std::numeric_limits<double>::infinity();
    r.worst_second_diff = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) max_abs = std::max(max_abs, std::abs(d[i]));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double step = d[i + 1] - d[i];
        if (step < r.worst_step) {
            r.worst_step = step;
            r.worst_step_index = i;
        }
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double sd = d[i - 1] - 2.0 * d[i] + d[i + 1];
        if (sd < r.worst_second_diff) {
            r.worst_second_diff = sd;
            r.worst_second_diff_index = i;
        }
    }
    r.monotone = r.worst_step >= -kDeltaFlagTol;
    r.midpoint_convex = r.worst_second_diff >= -kDeltaFlagTol;
    r.identically_zero = max_abs <= kDeltaZeroTol;
    r.divergent = d.back() > d.front() + 10.0 * kDeltaFlagTol && d[n - 1] - d[n - 2] > 0.0;
    return r;
}

// ---------------------------------------------------------------------------
// Stein certification.

enum class SteinStatus { CertifiedStein, RefutedStein, Inconclusive };

enum class SteinReason {
    LogConvexProfile,      // m = 0: log-convexity is decisive
    LogConvexityViolated,  // refuted: rho itself is not log-convex
    DeltaDecreasing,       // refuted: delta must be nondecreasing
    DeltaConvexIncreasing, // certified: the sufficient composition test
    NegativeSubmeanMargin, // refuted: a sampled circle violates the submean inequality
    ProbeInconclusive,     // necessary tests pass, sufficient test fails, probe silent
};

inline const char* to_string(SteinStatus s) {
    switch (s) {
        case SteinStatus::CertifiedStein: return "CertifiedStein";
        case SteinStatus::RefutedStein: return "RefutedStein";
        case SteinStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

inline const char* to_string(SteinReason r) {
    switch (r) {
        case SteinReason::LogConvexProfile: return "log_convex_profile";
        case SteinReason::LogConvexityViolated: return "log_convexity_violated";
        case SteinReason::DeltaDecreasing: return "delta_decreasing";
        case SteinReason::DeltaConvexIncreasing: return "delta_convex_increasing";
        case SteinReason::NegativeSubmeanMargin: return "negative_submean_margin";
        case SteinReason::ProbeInconclusive: return "probe_inconclusive";
    }
    return "?";
}

struct CertifyParams {
    std::uint64_t seed = 1;
    double h_grid_max = 5.0;  // log-convexity checked on [-h_grid_max, h_grid_max]
    int h_grid_points = 101;  // points per half-axis
    double tau_max = 18.0;
    int tau_steps = 360;
    ProbeParams probe{};
    double tol_refute = 1e-5;
};

struct SteinVerdict {
    SteinStatus status;
    SteinReason reason;
    ConvexityReport convexity;
    std::optional<DeltaReport> delta;
    std::optional<SubmeanReport> probe;
};

// The symmetric grid catches convexity failures of the even extension at 0.
inline std::vector<double> convexity_check_grid(double h_max, int points_per_side) {
    std::vector<double> g = uniform_grid(-h_max, h_max, 2 * points_per_side - 1);
    return g;
}

inline SteinVerdict certify_stein(const RhoProfile& rho, int m, const CertifyParams& params = {}) {
    if (!is_normalized(rho))
        throw std::invalid_argument("certify_stein: profile must be normalized");
    const int mm = std::abs(m);  // negative weights reduce through the duality map

    SteinVerdict v{SteinStatus::Inconclusive, SteinReason::ProbeInconclusive, {}, {}, {}};
    v.convexity = check_log_convex(rho, convexity_check_grid(params.h_grid_max, params.h_grid_points));

    if (mm == 0) {
        v.status = v.convexity.passes ? SteinStatus::CertifiedStein : SteinStatus::RefutedStein;
        v.reason = v.convexity.passes ? SteinReason::LogConvexProfile
                                      : SteinReason::LogConvexityViolated;
        return v;
    }

    v.delta = delta_report(rho, mm, params.tau_max, params.tau_steps);

    if (!v.convexity.passes) {
        v.status = SteinStatus::RefutedStein;
        v.reason = SteinReason::LogConvexityViolated;
        return v;
    }
    if (!v.delta->monotone) {
        v.status = SteinStatus::RefutedStein;
        v.reason = SteinReason::DeltaDecreasing;
        return v;
    }
    if (v.delta->midpoint_convex) {
        v.status = SteinStatus::CertifiedStein;
        v.reason = SteinReason::DeltaConvexIncreasing;
        return v;
    }

    ProbeParams pp = params.probe;
    pp.seed = params.seed;
    v.probe = submean_probe(ProbeFn::LogNorm, pp, &rho, mm);
    if (v.probe->worst_margin < -params.tol_refute) {
        v.status = SteinStatus::RefutedStein;
        v.reason = SteinReason::NegativeSubmeanMargin;
        return v;
    }
    v.status = SteinStatus::Inconclusive;
    v.reason = SteinReason::ProbeInconclusive;
    return v;
}

// ---------------------------------------------------------------------------
// Containment in the extremal bundle: rho >= rho_max pointwise.

struct ContainmentReport {
    bool passes = true;
    double worst_gap = 0.0;  // min of rho(h) - rho_max(h)
    double worst_h = 0.0;
};

inline ContainmentReport check_containment_max(const RhoProfile& rho, int m,
                                               const std::vector<double>& h_grid) {
    if (h_grid.empty()) throw std::invalid_argument("check_containment_max: empty grid");
    ContainmentReport r;
    bool first = true;
    for (double h : h_grid) {
        const double gap = eval_rho(rho, h) - rho_max(m, h);
        if (first || gap < r.worst_gap) {
            first = false;
            r.worst_gap = gap;
            r.worst_h = h;
        }
    }
    r.passes = r.worst_gap >= -1e-10;
    return r;
}

// ---------------------------------------------------------------------------
// Hyperbolicity witness.

struct Witness {
    Complex center_z3, center_z4;
    double eps = 0.0;
    double c_bound = 0.0;  // C = -log t_min: depth bound on log t over the ball
    double d_bound = 0.0;  // D: least tau with delta(tau) >= (m/2) C
    double s_bound = 0.0;  // e^{D + C}
};

struct WitnessParams {
    double tau_scan_max = 64.0;
    int scan_steps = 2048;
    double bisect_tol = 1e-12;
};

inline Witness hyperbolicity_witness(const RhoProfile& rho, int m, Complex center_z3,
                                     Complex center_z4, double eps,
                                     const WitnessParams& wp = {}) {
    if (m <= 0) throw std::invalid_argument("hyperbolicity_witness: weight must be positive");
    if (!is_normalized(rho))
        throw std::invalid_argument("hyperbolicity_witness: profile must be normalized");
    if (!(eps > 0.0)) throw std::invalid_argument("hyperbolicity_witness: eps must be positive");

    const double cn = std::sqrt(std::norm(center_z3) + std::norm(center_z4));
    if (!(eps < cn))
        throw std::domain_error("hyperbolicity_witness: ball touches the puncture");
    if (!(cn + eps < 1.0))
        throw std::domain_error("hyperbolicity_witness: ball touches the unit sphere");

    const DeltaReport dr = delta_report(rho, m, wp.tau_scan_max, wp.scan_steps);
    if (dr.identically_zero)
        throw std::domain_error(
            "hyperbolicity_witness: delta vanishes identically (extremal bundle, no witness)");
    if (!dr.monotone)
        throw std::domain_error("hyperbolicity_witness: delta is not nondecreasing");

    const double t_min = (cn - eps) * (cn - eps);
    const double c_bound = -std::log(t_min);
    const double threshold = 0.5 * static_cast<double>(m) * c_bound;

    std::size_t hit = dr.tau_grid.size();
    for (std::size_t i = 0; i < dr.delta_values.size(); ++i) {
        if (dr.delta_values[i] >= threshold) {
            hit = i;
            break;
        }
    }
    if (hit == dr.tau_grid.size())
        throw std::domain_error("hyperbolicity_witness: threshold not reached within scan range");

    // Refine the first crossing; keep the upper end so delta(D) >= threshold.
    double lo = hit == 0 ? 0.0 : dr.tau_grid[hit - 1];
    double hi = dr.tau_grid[hit];
    while (hi - lo > wp.bisect_tol) {
        const double mid = 0.5 * (lo + hi);
        if (delta(rho, m, mid) >= threshold)
            hi = mid;
        else
            lo = mid;
    }

    Witness w;
    w.center_z3 = center_z3;
    w.center_z4 = center_z4;
    w.eps = eps;
    w.c_bound = c_bound;
    w.d_bound = hi;
    w.s_bound = std::exp(w.d_bound + c_bound);
    return w;
}

// Rejection-sample covering members whose fiber lies in the witness ball and
// check s = |z1|^2 + |z2|^2 against the bound. Cheap necessary tests on the
// sampled (h, x) run before the group element is materialized; the final
// decision uses the realized matrix.
struct SpotCheckReport {
    int requested = 0;
    int accepted = 0;
    std::uint64_t attempts = 0;
    double max_s = 0.0;
    double s_allowed = 0.0;
    bool all_within = false;
};

inline SpotCheckReport witness_spot_check(const RhoProfile& rho, int m, const Witness& w,
                                          std::uint64_t seed, int n_target, double h_max,
                                          double x_max,
                                          std::uint64_t max_attempts = 400000000ull) {
    if (m <= 0) throw std::invalid_argument("witness_spot_check: weight must be positive");
    const Sampler sampler(seed, h_max, x_max);
    const double cn = std::sqrt(std::norm(w.center_z3) + std::norm(w.center_z4));
    const double r_lo = cn - w.eps, r_hi = cn + w.eps;
    const double eps2 = w.eps * w.eps;

    SpotCheckReport rep;
    rep.requested = n_target;
    rep.s_allowed = w.s_bound * (1.0 + 1e-9);
    rep.all_within = true;

    const double log_r_lo = std::log(r_lo) - 1e-9, log_r_hi = std::log(r_hi) + 1e-9;

    std::uint64_t i = 0;
    for (; rep.accepted < n_target && i < max_attempts; ++i) {
        const double x = sampler.sampled_x(i);
        if (x > log_r_hi) continue;  // log cosh >= 0 makes this necessary
        const double h = sampler.sampled_h(i);
        // |(z3, z4)| = e^x sqrt(cosh 2h) and cover membership depend on (h, x)
        // only; both tests run with slack before the group element is built
        const double lc = log_cosh(2.0 * h);
        const double log_fiber_r = x + 0.5 * lc;
        if (log_fiber_r < log_r_lo || log_fiber_r > log_r_hi) continue;
        if (m * x + log_eval_rho(rho, h) >= 1e-12) continue;

        const GroupElement g = sampler.group(i);
        if (!cover_membership(g, rho, m)) continue;
        const Complex d3 = g.m.z3 - w.center_z3, d4 = g.m.z4 - w.center_z4;
        if (std::norm(d3) + std::norm(d4) > eps2) continue;

        const double s = std::norm(g.m.z1) + std::norm(g.m.z2);
        ++rep.accepted;
        rep.max_s = std::max(rep.max_s, s);
        if (s > rep.s_allowed) rep.all_within = false;
    }
    rep.attempts = i;
    return rep;
}

// ---------------------------------------------------------------------------
// The distinguished curve x -> delta(log(1 + e^{2x})): the pullback of the
// invariant function along the unipotent curve x + iy -> [[1, 0], [e^{x+iy}, 1]],
// which must be convex (and -> 0 as x -> -infinity) whenever the bundle is
// Stein. This is the targeted refutation curve for non-Stein profiles.

struct CurveReport {
    std::vector<double> x_grid;
    std::vector<double> values;
    bool midpoint_convex = true;
    double worst_second_diff = 0.0;
};

inline CurveReport distinguished_curve(const RhoProfile& rho, int m,
                                       const std::vector<double>& x_grid) {
    if (m <= 0) throw std::invalid_argument("distinguished_curve: weight must be positive");
    if (x_grid.size() < 3)
        throw std::invalid_argument("distinguished_curve: need at least 3 grid points");
    for (std::size_t i = 1; i < x_grid.size(); ++i)
        if (!(x_grid[i] > x_grid[i - 1]))
            throw std::invalid_argument("distinguished_curve: grid must be strictly increasing");

    CurveReport r;
    r.x_grid = x_grid;
    r.values.reserve(x_grid.size());
    for (double x : x_grid) r.values.push_back(delta(rho, m, log1p_exp(2.0 * x)));

    r.worst_second_diff = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < r.values.size(); ++i) {
        const double mu = (x_grid[i] - x_grid[i - 1]) / (x_grid[i + 1] - x_grid[i - 1]);
        const double chord = (1.0 - mu) * r.values[i - 1] + mu * r.values[i + 1];
        r.worst_second_diff = std::min(r.worst_second_diff, 2.0 * (chord - r.values[i]));
    }
    r.midpoint_convex = r.worst_second_diff >= -kDeltaFlagTol;
    return r;
}

}  // namespace qbl
