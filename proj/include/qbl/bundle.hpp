#pragma once

// Points of the homogeneous line bundle L^m over the affine quadric and its
// punctured disc sub-bundles.
//
// A point is a class [g, z] with g in SL(2,C), z in C and integer weight m,
// under the equivalence
//
//   (g, z) ~ (g diag(kappa^{-1}, kappa), kappa^{-m} z),   kappa in C^*,
//
// the unique sign convention under which the fiber norm
//
//   |z| |zeta|^m rho(h)
//
// is independent of the representative (|kappa^{-m} z| |zeta kappa|^m =
// |z| |zeta|^m). The weight-m disc bundle of profile rho is the sublevel set
// {norm < 1}; removing the zero section gives the punctured bundle, whose
// m-sheeted covering inside SL(2,C) is {|zeta|^m rho(h) < 1} with deck group
// the m-th roots of unity acting through the torus factor.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "qbl/algebra.hpp"
#include "qbl/mostow.hpp"
#include "qbl/profile.hpp"

namespace qbl {

struct BundlePoint {
    GroupElement g;
    Complex z;
    int m;
};

// Second column of a covering representative, tagged with the weight; the
// fiber datum of the projection to C^2 \ {0}.
struct FiberClass {
    Complex z3, z4;
    int m;
};

enum class Region { Interior, Boundary, Exterior };

inline Complex ipow(Complex base, int n) {
    if (n < 0) return ipow(1.0 / base, -n);
    Complex r = 1.0;
    while (n-- > 0) r *= base;
    return r;
}

// True iff q is the image of p under the equivalence: d = p.g^{-1} q.g must be
// diagonal, d = diag(kappa^{-1}, kappa), with q.z = kappa^{-m} p.z.
inline bool same_point(const BundlePoint& p, const BundlePoint& q, double tol = 1e-12) {
    if (p.m != q.m) throw std::invalid_argument("same_point: weight mismatch");
    const Matrix2 d = adjugate(p.g.m) * q.g.m;
    if (std::abs(d.z2) > tol || std::abs(d.z3) > tol) return false;
    // kappa^{-1} = d.z1, kappa = d.z4; use whichever power avoids a reciprocal
    const Complex factor = p.m >= 0 ? ipow(d.z1, p.m) : ipow(d.z4, -p.m);
    return std::abs(q.z - factor * p.z) <= tol;
}

// |z| |zeta|^m rho(h) with |zeta| and h pushed down from the decomposition of
// the group component; representative-independent under the equivalence above.
inline double fiber_norm(const BundlePoint& p, const RhoProfile& rho) {
    const double az = std::abs(p.z);
    if (az == 0.0) return 0.0;
    const InvariantCoords c = coords(p.g);
    const double x = 0.25 * std::log(c.t / c.s);  // log|zeta|
    return az * std::exp(static_cast<double>(p.m) * x + log_eval_rho(rho, radial(c)));
}

inline Region membership(const BundlePoint& p, const RhoProfile& rho, bool punctured) {
    static constexpr double tol_b = 1e-10;
    if (punctured && std::abs(p.z) == 0.0) return Region::Exterior;
    const double n = fiber_norm(p, rho);
    if (std::abs(n - 1.0) <= tol_b) return Region::Boundary;
    return n < 1.0 ? Region::Interior : Region::Exterior;
}

// Membership of g in the covering domain {|zeta|^m rho(h) < 1} inside SL(2,C).
inline bool cover_membership(const GroupElement& g, const RhoProfile& rho, int m) {
    if (m == 0) throw std::invalid_argument("cover_membership: weight must be nonzero");
    const InvariantCoords c = coords(g);
    const double x = 0.25 * std::log(c.t / c.s);
    return static_cast<double>(m) * x + log_eval_rho(rho, radial(c)) < 0.0;
}

// The covering projection g -> [g, 1].
inline BundlePoint cover_project(const GroupElement& g, int m) {
    if (m == 0) throw std::invalid_argument("cover_project: weight must be nonzero");
    return {g, 1.0, m};
}

// The weight-reversing biholomorphism [g, z] -> [W g W^{-1}, z] into L^{-m}.
// Conjugation by the basis matrix W realizes the algebra map
// (C, H, W) -> (-C, -H, W), hence inverts the torus and flips the radial flow,
// and preserves the fiber norm: norm_{-m,rho} o dual = norm_{m,rho}.
inline BundlePoint dual_map(const BundlePoint& p) {
    const Matrix2 w = basis_w();
    return {GroupElement::unchecked(w * p.g.m * adjugate(w)), p.z, -p.m};
}

// Fiber datum (z3, z4) of a punctured-bundle point, read from the covering
// representative supplied by the caller (no reduction to the z = 1 sheet is
// attempted: that would require an m-th root branch choice).
inline FiberClass project_fiber(const BundlePoint& p) {
    if (std::abs(p.z) == 0.0)
        throw std::invalid_argument("project_fiber: point lies on the zero section");
    return {p.g.m.z3, p.g.m.z4, p.m};
}

// [z, w] -> (z^m, z^{m-1} w, w^m): injects the quotient of the punctured ball
// by the m-th roots of unity into a polydisc; invariant under the deck action.
inline std::array<Complex, 3> embed_iota(const FiberClass& f) {
    if (f.m < 1) throw std::invalid_argument("embed_iota: weight must be >= 1");
    return {ipow(f.z3, f.m), ipow(f.z3, f.m - 1) * f.z4, ipow(f.z4, f.m)};
}

// Image of a weight -1 point in the tautological bundle over P^1: the line
// spanned by g (0,1)^T together with the vector z g (0,1)^T on it.
struct TautImage {
    std::array<Complex, 2> line;   // projective representative
    std::array<Complex, 2> point;  // vector lying on that line
};

inline TautImage taut_map(const BundlePoint& p) {
    if (p.m != -1) throw std::invalid_argument("taut_map: weight must be -1");
    const Complex z3 = p.g.m.z3, z4 = p.g.m.z4;
    return {{z3, z4}, {p.z * z3, p.z * z4}};
}

// w . g := g [[1, 0], [w, 1]]. The second column is untouched, so the
// t-coordinate is invariant, exactly.
inline GroupElement c_action(const GroupElement& g, Complex w) {
    const Matrix2& m = g.m;
    return GroupElement::unchecked({m.z1 + w * m.z3, m.z2 + w * m.z4, m.z3, m.z4});
}

}  // namespace qbl
